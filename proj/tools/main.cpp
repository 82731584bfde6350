#include "sputter/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sputter::run_cli(argc, argv, std::cout, std::cerr);
}
