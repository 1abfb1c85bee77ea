#include <iostream>
#include <string>
#include <vector>

#include "plfit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return plfit::cli::run(args, std::cout, std::cerr);
}
