#pragma once

namespace fgns {

// Execution policy for the data-parallel kernels. `serial` runs the reference
// loop; `parallel` runs the OpenMP version. Both produce identical results.
enum class Exec { serial, parallel };

// Caps OpenMP worker threads (0 restores the runtime default).
void set_thread_limit(int threads);
int thread_limit();

// Reads FGNS_THREADS and applies it; returns the value used (0 if unset).
// Throws ConfigError for anything but a positive integer.
int apply_thread_env();

}  // namespace fgns
