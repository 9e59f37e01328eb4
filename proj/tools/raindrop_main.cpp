#include <iostream>
#include <string>
#include <vector>

#include "raindrop/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return raindrop::cli::run_cli(args, std::cout, std::cerr);
}
