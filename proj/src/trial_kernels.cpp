#include <algorithm>
#include <cmath>

#include "qfoundry/errors.hpp"
#include "qfoundry/inequalities.hpp"
#include "qfoundry/rng.hpp"

namespace qfoundry::ineq {
namespace {

MeasurementSetting random_setting(rng::Engine& engine) {
  for (;;) {
    const Vec3 v(rng::standard_normal(engine), rng::standard_normal(engine), rng::standard_normal(engine));
    if (v.norm() > 1e-6) return MeasurementSetting::normalized(v);
  }
}

TrialOutcome run_trial(std::uint64_t seed, std::size_t k) {
  rng::Engine engine = rng::substream(seed, k);
  qcore::CVector amps(4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    const double re = rng::standard_normal(engine);
    amps(i) = qcore::Complex(re, rng::standard_normal(engine));
  }
  const StateVector state = StateVector::normalized({2, 2}, amps);
  const MeasurementSetting a0 = random_setting(engine);
  const MeasurementSetting a1 = random_setting(engine);
  const MeasurementSetting b0 = random_setting(engine);
  const MeasurementSetting b1 = random_setting(engine);
  const CorrelationRecord r = quantum_record(state, {a0, a1}, {b0, b1});
  const auto& c = r.c;
  const double variants[4] = {
      c[0][0] + c[0][1] + c[1][0] - c[1][1],
      c[0][0] + c[0][1] - c[1][0] + c[1][1],
      c[0][0] - c[0][1] + c[1][0] + c[1][1],
      -c[0][0] + c[0][1] + c[1][0] + c[1][1],
  };
  double s = 0.0;
  for (double v : variants) s = std::max(s, std::abs(v));
  return TrialOutcome{s, tlm_check(r)};
}

LeggettScanRow scan_row(double phi) {
  const double s = leggett_quantum_value(phi);
  const double b = leggett_bound(phi);
  return LeggettScanRow{phi, s, b, s - b};
}

std::size_t argmax_of(const std::vector<LeggettScanRow>& rows) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].violation > rows[best].violation) best = i;
  }
  return best;
}

}  // namespace

std::vector<TrialOutcome> random_quantum_trials_serial(std::size_t trials, std::uint64_t seed) {
  std::vector<TrialOutcome> out(trials);
  for (std::size_t k = 0; k < trials; ++k) out[k] = run_trial(seed, k);
  return out;
}

std::vector<TrialOutcome> random_quantum_trials_omp(std::size_t trials, std::uint64_t seed) {
  std::vector<TrialOutcome> out(trials);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(trials); ++k) {
    out[static_cast<std::size_t>(k)] = run_trial(seed, static_cast<std::size_t>(k));
  }
  return out;
}

std::vector<TrialOutcome> random_quantum_trials(std::size_t trials, std::uint64_t seed, Exec exec) {
  return exec == Exec::Serial ? random_quantum_trials_serial(trials, seed) : random_quantum_trials_omp(trials, seed);
}

LeggettScan leggett_violation_scan(const std::vector<double>& phis, Exec exec) {
  if (phis.empty()) throw ValidationError("empty phi grid");
  // Range errors must surface before the parallel region.
  for (double phi : phis) leggett_bound(phi);
  LeggettScan scan;
  scan.rows.resize(phis.size());
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < phis.size(); ++i) scan.rows[i] = scan_row(phis[i]);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(phis.size()); ++i) {
      scan.rows[static_cast<std::size_t>(i)] = scan_row(phis[static_cast<std::size_t>(i)]);
    }
  }
  scan.argmax = argmax_of(scan.rows);
  return scan;
}

}  // namespace qfoundry::ineq
