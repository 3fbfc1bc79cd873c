#pragma once

// Self-check of the toolkit's headline numbers. The report text carries no timings, so two runs
// with the same options are byte-identical.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qfoundry/exec.hpp"
#include "qfoundry/rng.hpp"

namespace qfoundry::verify {

struct VerifyOptions {
  std::uint64_t seed = rng::kDefaultSeed;
  double kcbs_theta_offset = 0.0;  ///< radians; nonzero injects a fault into the KCBS check
  Exec exec = Exec::Parallel;
};

struct Check {
  int id;
  std::string name;
  bool pass;
  std::string measured;
  std::string expected;
};

struct Report {
  std::vector<Check> checks;

  bool all_pass() const;
  std::string text() const;
};

inline constexpr int kCheckCount = 12;

/// Runs check `id` (1-based).
Check run_check(int id, const VerifyOptions& options = {});

/// Runs every check in order; `observer` sees each check with its wall time in seconds.
Report verify_all(const VerifyOptions& options = {},
                  const std::function<void(const Check&, double seconds)>& observer = {});

}  // namespace qfoundry::verify
