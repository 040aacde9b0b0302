// dressedspec: command-line front end

#include <iostream>

#include "dressedspec/cli/commands.hpp"

int main(int argc, char** argv)
{
    return dressedspec::cli::run_cli(argc, argv, std::cout, std::cerr);
}
