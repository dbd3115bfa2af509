#include "decoygraph/format.hpp"

#include <cmath>
#include <cstdio>

namespace decoygraph {

double round6(double v) {
  double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", round6(v));
  return buf;
}

}  // namespace decoygraph
