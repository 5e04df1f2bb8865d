#pragma once

namespace dasdn {

/// Selects between the OpenMP kernel and its serial reference. Both produce
/// bit-identical results; the serial form exists for testing and benchmarking.
enum class Exec { serial, parallel };

/// Threads OpenMP will use for parallel kernels (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace dasdn
