#include <iostream>

#include "qgrad/cli.hpp"

int main(int argc, char** argv) {
    return qgrad::run_cli(argc, argv, std::cout, std::cerr);
}
