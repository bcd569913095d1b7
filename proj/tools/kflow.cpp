#include <iostream>
#include <string>
#include <vector>

#include "kflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kflow::cli::run(args, std::cout, std::cerr);
}
