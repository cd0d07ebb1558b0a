#include <iostream>
#include <string>
#include <vector>

#include "derfolio/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return derfolio::cli::run(args, std::cout, std::cerr);
}
