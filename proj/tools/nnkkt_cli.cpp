#include <vector>

#include "nnkkt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nnkkt::run_cli(std::move(args));
}
