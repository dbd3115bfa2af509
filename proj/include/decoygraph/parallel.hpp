#pragma once

namespace decoygraph {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both produce bitwise-identical results.
enum class Execution { serial, parallel };

/// Applies DECOYGRAPH_THREADS (if set and positive) as the OpenMP thread cap.
void configure_threads_from_env();

}  // namespace decoygraph
