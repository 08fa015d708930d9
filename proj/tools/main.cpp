#include <iostream>

#include "liftcheck/cli.hpp"

int main(int argc, char** argv) {
    return liftcheck::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
