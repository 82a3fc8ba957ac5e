#include <iostream>
#include <string>
#include <vector>

#include "mulcalc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mulcalc::cli::run(args, std::cout, std::cerr);
}
