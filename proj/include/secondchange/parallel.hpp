#pragma once

#include <cstddef>
#include <optional>

namespace secondchange {

/// Selects the serial reference path or the OpenMP path of a kernel. Both
/// produce bit-identical output; the serial path is kept for testing and
/// benchmarking.
enum class Execution { serial, parallel };

/// Thread count from SECONDCHANGE_THREADS, if set to a positive integer.
[[nodiscard]] std::optional<int> threads_from_environment();

/// Sets the OpenMP team size for subsequent parallel kernels.
void set_thread_count(int threads);

[[nodiscard]] int max_threads();

}  // namespace secondchange
