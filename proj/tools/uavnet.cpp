#include "uavnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return uavnet::run_cli(argc, argv, std::cout, std::cerr);
}
