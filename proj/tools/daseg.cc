#include <iostream>
#include <string>
#include <vector>

#include "daseg/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return daseg::Dispatch(args, std::cout, std::cerr);
}
