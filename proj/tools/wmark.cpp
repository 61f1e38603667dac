#include <string>
#include <vector>

#include "wmark_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return wmark::cli::run(args);
}
