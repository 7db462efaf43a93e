#include <iostream>

#include "dret/cli.hpp"

int main(int argc, char** argv) {
    return dret::cli::main(argc, argv, std::cout, std::cerr);
}
