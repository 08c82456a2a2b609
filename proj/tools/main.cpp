#include <iostream>

#include "qapga_cli.hpp"

int main(int argc, char** argv) {
  return qapga::cli::run_cli(argc, argv, std::cout, std::cerr);
}
