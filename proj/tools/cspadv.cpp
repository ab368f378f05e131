#include <iostream>
#include <string>
#include <vector>

#include "cspadv/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cspadv::cli_main(args, std::cout, std::cerr);
}
