#include <iostream>

#include "mmdwr/cli.hpp"

int main(int argc, char** argv) { return mmdwr::cli_main(argc, argv, std::cout, std::cerr); }
