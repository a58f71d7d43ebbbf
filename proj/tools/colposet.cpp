#include <iostream>

#include "colposet/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return colposet::run_cli(args, std::cout, std::cerr);
}
