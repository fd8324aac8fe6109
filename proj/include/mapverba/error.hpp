#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mapverba {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `position` is a byte offset into the input.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Well-formed input that violates the data model (duplicate id, unknown
/// legend reference, unsupported geometry, ...).
class SemanticError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its domain (coincident points for a
/// bearing, a point passed to orientation, an empty document, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace mapverba
