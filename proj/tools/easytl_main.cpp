#include <iostream>

#include "easytl/cli.hpp"

int main(int argc, char** argv) {
  return easytl::cli::main(argc, argv, std::cout, std::cerr);
}
