#include "adiacross/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return adiacross::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                              std::cerr);
}
