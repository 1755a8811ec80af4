#include <iostream>

#include "srw/cli.hpp"

int main(int argc, char** argv) {
    return srw::cli_main(argc, argv, std::cout, std::cerr);
}
