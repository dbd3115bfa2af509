#include "decoygraph/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace decoygraph {

void configure_threads_from_env() {
  const char* raw = std::getenv("DECOYGRAPH_THREADS");
  if (!raw || !*raw) return;
  try {
    std::size_t used = 0;
    const int n = std::stoi(raw, &used);
    if (used == std::string(raw).size() && n > 0) omp_set_num_threads(n);
  } catch (const std::exception&) {
    // unparsable values leave the OpenMP default in place
  }
}

}  // namespace decoygraph
