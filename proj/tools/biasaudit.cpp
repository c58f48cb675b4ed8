#include <iostream>
#include <string>
#include <vector>

#include "biasaudit/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return biasaudit::cli::runCli(args, std::cout, std::cerr);
}
