#include <iostream>

#include "pgschema/app/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pgschema::app::run_cli(args, std::cout, std::cerr);
}
