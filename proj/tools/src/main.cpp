#include <iostream>

#include "qtm_cli/cli.hpp"

int main(int argc, char** argv) {
    return qtm::cli::run_cli(argc, argv, std::cout, std::cerr);
}
