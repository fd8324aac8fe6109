#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mapverba/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    mapverba::cli::Terminal term;
    term.color = mapverba::cli::color_allowed(isatty(STDOUT_FILENO) != 0, std::getenv("MAPVERBA_NO_COLOR"));
    return mapverba::cli::run(args, std::cout, std::cerr, term);
}
