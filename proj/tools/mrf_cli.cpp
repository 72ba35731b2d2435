#include <iostream>
#include <string>
#include <vector>

#include "mrf/io.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mrf::cli_main(args, std::cout, std::cerr);
}
