#include <iostream>
#include <string>
#include <vector>

#include "ssa_autogroup/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return ssa_autogroup::cli::run(args, std::cout, std::cerr);
}
