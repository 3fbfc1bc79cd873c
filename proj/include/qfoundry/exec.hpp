#pragma once

namespace qfoundry {

// Serial is the reference path; Parallel must produce bit-identical results.
enum class Exec { Serial, Parallel };

/// Sets the OpenMP worker count used by Exec::Parallel kernels. jobs <= 0 keeps the runtime default.
void set_jobs(int jobs);

}  // namespace qfoundry
