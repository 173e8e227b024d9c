#include <iostream>

#include "histnec/cli.hpp"

int main(int argc, char** argv) {
    return histnec::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
