#include <iostream>
#include <string>
#include <vector>

#include "decoygraph/cli.hpp"
#include "decoygraph/parallel.hpp"

int main(int argc, char** argv) {
  decoygraph::configure_threads_from_env();
  std::vector<std::string> args(argv + 1, argv + argc);
  return decoygraph::run(args, std::cout, std::cerr);
}
