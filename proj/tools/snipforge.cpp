#include <iostream>
#include <string>
#include <vector>

#include "snipforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return snipforge::run(args, std::cout, std::cerr);
}
