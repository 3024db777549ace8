#pragma once

namespace hspline {

/// Selects the serial reference kernel or its OpenMP counterpart. Both
/// produce bit-identical results: parallel kernels only distribute
/// independent per-cell work and reduce in cell order afterwards.
enum class Execution { serial, parallel };

/// Environment variable read by worker_count().
inline constexpr const char* kThreadsEnv = "HSPLINE_NUM_THREADS";

/// Worker count for parallel kernels: HSPLINE_NUM_THREADS when set to a
/// positive integer, otherwise the OpenMP default (1 without OpenMP).
[[nodiscard]] int worker_count();

} // namespace hspline
