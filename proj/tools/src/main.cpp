#include "gnarex_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return gnarex::cli::run(argc, argv, std::cout, std::cerr);
}
