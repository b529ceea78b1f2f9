#include "ehnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ehnet::cli::run_main(args, std::cout, std::cerr);
}
