#pragma once

namespace ccv {

/// Execution mode for the exhaustive kernels. Serial and Parallel produce
/// identical reports; counterexamples are always the first in canonical
/// enumeration order regardless of scheduling.
enum class Exec { Serial, Parallel };

/// Number of worker threads a Parallel kernel would use (1 without OpenMP).
int parallel_width();

} // namespace ccv
