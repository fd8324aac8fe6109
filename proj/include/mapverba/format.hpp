#pragma once

// Number, unit and date rendering shared by every text generator.

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace mapverba::text {

inline std::string strip_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

/// Three significant figures, half away from zero, trailing zeros removed.
inline std::string sig3(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? "0" : fmt::format("{}", v);
    const double mag = std::abs(v);
    int e = static_cast<int>(std::floor(std::log10(mag)));
    // A relative nudge keeps decimal ties like 0.145 from rounding down
    // because of their binary representation.
    double r = std::floor(mag * std::pow(10.0, 2 - e) * (1.0 + 1e-12) + 0.5);
    if (r >= 1000.0) {
        ++e;
        r = std::floor(mag * std::pow(10.0, 2 - e) * (1.0 + 1e-12) + 0.5);
    }
    const int decimals = std::max(0, 2 - e);
    const double rounded = r / std::pow(10.0, 2 - e);
    std::string s = strip_zeros(fmt::format("{:.{}f}", rounded, decimals));
    return v < 0 ? "-" + s : s;
}

/// Meters, switching to kilometers above 1000 m.
inline std::string length(double meters) {
    if (std::abs(meters) > 1000.0) return sig3(meters / 1000.0) + " km";
    return sig3(meters) + " m";
}

inline std::string area(double square_meters) {
    if (std::abs(square_meters) > 1e6) return sig3(square_meters / 1e6) + " square kilometers";
    return sig3(square_meters) + " square meters";
}

/// Shortest exact rendering of a data value: integers without a decimal point.
inline std::string value(double v) {
    if (std::isfinite(v) && std::abs(v) < 1e15 && v == std::floor(v)) return fmt::format("{:.0f}", v);
    return fmt::format("{}", v);
}

/// "2021-01-01" -> "1/1/2021". Anything that is not an ISO date is returned as is.
inline std::string date(std::string_view iso) {
    int y = 0, m = 0, d = 0;
    if (iso.size() >= 10 && iso[4] == '-' && iso[7] == '-' &&
        std::sscanf(std::string(iso.substr(0, 10)).c_str(), "%4d-%2d-%2d", &y, &m, &d) == 3 && m >= 1 && m <= 12 &&
        d >= 1 && d <= 31)
        return fmt::format("{}/{}/{}", m, d, y);
    return std::string(iso);
}

/// "a", "a and b", "a, b, and c".
inline std::string join_list(const std::vector<std::string>& items) {
    if (items.empty()) return "";
    if (items.size() == 1) return items[0];
    if (items.size() == 2) return items[0] + " and " + items[1];
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        if (i + 1 == items.size()) out += "and ";
        out += items[i];
    }
    return out;
}

inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

/// Latitude/longitude with 7 decimals and hemisphere letters, latitude first.
inline std::string lat_lon(double lat, double lon) {
    return fmt::format("{:.7f}° {}, {:.7f}° {}", std::abs(lat), lat < 0 ? 'S' : 'N', std::abs(lon), lon < 0 ? 'W' : 'E');
}

/// Planar coordinate in meters, at most two decimals.
inline std::string planar_xy(double x, double y) {
    auto one = [](double v) {
        std::string s = strip_zeros(fmt::format("{:.2f}", v));
        return s == "-0" ? std::string("0") : s;
    };
    return fmt::format("x = {} m, y = {} m", one(x), one(y));
}

}  // namespace mapverba::text
