#include <iostream>
#include <string>
#include <vector>

#include "chipscore/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return chipscore::cli::run(args, std::cout, std::cerr);
}
