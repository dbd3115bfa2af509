#pragma once

#include <string>

namespace decoygraph {

/// Fixed six-decimal rendering used by every CSV writer; tiny magnitudes
/// print as 0.000000 rather than -0.000000.
std::string fixed6(double v);

/// Rounds to six decimals, for JSON output.
double round6(double v);

}  // namespace decoygraph
