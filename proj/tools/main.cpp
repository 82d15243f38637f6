#include <iostream>
#include <string>
#include <vector>

#include "sosgap/lab.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sosgap::cli_main(args, std::cout, std::cerr);
}
