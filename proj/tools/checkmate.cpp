#include "checkmate/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return checkmate::cli::main_entry(argc, argv, std::cout, std::cerr);
}
