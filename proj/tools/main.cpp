#include <iostream>

#include "sptetris/cli.hpp"

int main(int argc, char ** argv)
{
    return sptetris::run_cli(argc, argv, std::cout, std::cerr);
}
