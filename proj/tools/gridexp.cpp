#include <iostream>

#include "gridexp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gridexp::cli_main(args, std::cout, std::cerr);
}
