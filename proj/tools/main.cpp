#include <iostream>

#include "cli.hpp"

int main(int argc, char **argv)
{
    return hamcap::cli::run(argc, argv, std::cout, std::cerr);
}
