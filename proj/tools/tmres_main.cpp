#include <vector>

#include "tmres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tmres::run_cli(args);
}
