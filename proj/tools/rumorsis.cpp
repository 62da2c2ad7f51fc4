#include "rumorsis/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rumorsis::cli::run(argc, argv, std::cout, std::cerr);
}
