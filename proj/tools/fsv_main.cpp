#include <iostream>
#include <string>
#include <vector>

#include "fsv/frontend.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fsv::run_command(args, std::cout, std::cerr);
}
