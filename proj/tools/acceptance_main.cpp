#include <iostream>
#include <vector>

#include "cli.hpp"

// Same as `hamcap accept`, with any extra flags passed through.
int main(int argc, char **argv)
{
    std::vector<const char *> args{argv[0], "accept"};
    for (int i = 1; i < argc; ++i) {
        args.push_back(argv[i]);
    }
    return hamcap::cli::run(static_cast<int>(args.size()), args.data(), std::cout, std::cerr);
}
