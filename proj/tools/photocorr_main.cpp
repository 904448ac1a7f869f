#include <iostream>

#include "photocorr/cli.hpp"

int main(int argc, char** argv) { return photocorr::run_cli(argc, argv, std::cout, std::cerr); }
