#pragma once

// Bell-type and contextuality bounds, their quantum values, and the optimizers
// and randomized trials that probe them. Angles are radians throughout.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qfoundry/exec.hpp"
#include "qfoundry/qcore.hpp"

namespace qfoundry::ineq {

using qcore::MeasurementSetting;
using qcore::StateVector;
using qcore::Vec3;

/// c[i][j] = <A_i B_j>, plus optional marginals <A_i>, <B_j>.
struct CorrelationRecord {
  std::array<std::array<double, 2>, 2> c{};
  bool has_marginals = false;
  std::array<double, 2> mean_a{};
  std::array<double, 2> mean_b{};

  /// Throws ValidationError if any |c_ij| > 1 + 1e-12.
  static CorrelationRecord from(const std::array<std::array<double, 2>, 2>& c);
  static CorrelationRecord pr_box();
};

/// T[k][l] = <sigma_k (x) sigma_l> for a two-qubit state, so <a.sigma (x) b.sigma> = a^T T b.
Eigen::Matrix3d correlation_tensor(const StateVector& state);

/// Correlators and marginals of two-qubit spin measurements, through qcore expectation values.
CorrelationRecord quantum_record(const StateVector& state, const std::array<MeasurementSetting, 2>& a,
                                 const std::array<MeasurementSetting, 2>& b);

// ---------------------------------------------------------------------------
// Polarization: local table versus the Born rule

struct PolarizationProbabilities {
  double p_same;       ///< both pass or both block
  double p_both_pass;  ///< both pass
  double cos2;         ///< cos^2(theta_rel), the closed form of p_same
};

/// Born-rule probabilities on (|HH> + |VV>)/sqrt(2) with polarizers at 0 and theta_rel.
PolarizationProbabilities qm_same_polarization_probability(double theta_rel);

// ---------------------------------------------------------------------------
// CHSH

/// c00 + c01 + c10 - c11, unclamped.
double chsh_value(const CorrelationRecord& record);

struct ChshSettings {
  std::array<MeasurementSetting, 2> a;
  std::array<MeasurementSetting, 2> b;
};

struct ChshResult {
  double s_max;
  ChshSettings settings;
  std::size_t grid_points;
  std::size_t starts;
};

struct ChshOptions {
  double grid_step = 10.0 * 3.14159265358979323846 / 180.0;  ///< coarse in-plane grid step
  std::size_t starts = 12;                                    ///< refinement starts taken from the grid
  double size_tolerance = 1e-8;                               ///< simplex size at convergence
  std::size_t max_iterations = 20000;
  Exec exec = Exec::Parallel;
};

/// Coarse grid over four x-z plane angles, then Nelder-Mead refinement over all eight
/// spherical angles from the best grid points. Deterministic for a given state.
ChshResult chsh_optimize(const StateVector& state, const ChshOptions& options = {});

// ---------------------------------------------------------------------------
// Leggett inequality

/// 4 - (4/pi)|sin(phi/2)|, phi in [0, pi].
double leggett_bound(double phi);
/// |2(cos phi + 1)|, phi in [0, pi].
double leggett_quantum_value(double phi);

/// a1, b1 and a2, b2 separated by phi; b3 = a2.
struct LeggettSettings {
  MeasurementSetting a1, b1, a2, b2, b3;
};
LeggettSettings leggett_settings(double phi);

/// |E11 + E23| + |E22 + E23| with E_kl = <A_k B_l> on the singlet, evaluated in qcore.
double leggett_quantum_value_from_state(double phi);

/// Closed-form location of the largest gap: sin(phi/2) = 1/(2 pi).
double leggett_gap_root();

struct LeggettScanRow {
  double phi;
  double s_qm;
  double bound;
  double violation;  ///< s_qm - bound
};

struct LeggettScan {
  std::vector<LeggettScanRow> rows;
  std::size_t argmax;  ///< index of the largest violation (first on ties)
};

/// Grid lo, lo + step, ... up to hi (inclusive within step/2). Throws on an empty grid or a
/// grid that leaves [0, pi].
std::vector<double> make_grid(double lo, double hi, double step);

LeggettScan leggett_violation_scan(const std::vector<double>& phis, Exec exec = Exec::Parallel);

// ---------------------------------------------------------------------------
// KCBS

struct KcbsConfiguration {
  std::array<Vec3, 5> directions;
  Vec3 state;
};

/// Pentagram with cos^2(theta) = cos(pi/5)/(1 + cos(pi/5)) and axial state. `theta_offset`
/// perturbs theta, for fault injection.
KcbsConfiguration kcbs_build_pentagram(double theta_offset = 0.0);

/// max_j |l_j . l_{j+1}|.
double kcbs_adjacent_overlap(const KcbsConfiguration& config);

/// sum_j <Psi|A_j A_{j+1}|Psi>, A_j = I - 2|l_j><l_j|, without the compatibility check.
double kcbs_correlator_sum(const KcbsConfiguration& config);

/// kcbs_correlator_sum after checking every adjacent pair is orthogonal within 1e-10.
double kcbs_value(const KcbsConfiguration& config);

/// Minimum of sum_j v_j v_{j+1} over all 32 assignments v_j = +-1.
int kcbs_classical_minimum();

// ---------------------------------------------------------------------------
// Hardy

struct HardyConfiguration {
  double gamma;
  qcore::CVector plus, minus;              ///< eigenkets of alpha (+1, -1)
  qcore::CVector plus_prime, minus_prime;  ///< eigenkets of alpha'
  double n, n_prime;                       ///< normalizers
};

/// gamma in [0, pi/2]. Endpoints are accepted and flagged by hardy_probabilities.
HardyConfiguration hardy_configuration(double gamma);

struct HardyProbabilities {
  double p1;  ///< P(alpha = +1, beta = +1)
  double p2;  ///< P(alpha = -1, beta' = -1)
  double p3;  ///< P(alpha' = -1, beta = -1)
  double p4;  ///< P(alpha' = -1, beta' = -1)
  double p4_closed_form;
  bool separable;  ///< gamma at 0 or pi/2
};

/// Joint probabilities on cos(g)|0>|1> - sin(g)|1>|0>. Party B measures the same observables
/// with |0> and |1> exchanged.
HardyProbabilities hardy_probabilities(const HardyConfiguration& config);

/// (sin 4g / (4 (cos^3 g + sin^3 g)))^2.
double hardy_p4_closed_form(double gamma);

/// Over all 16 value assignments that respect the three zero conditions, how many give
/// alpha' = beta' = -1.
int hardy_classical_p4_count();

// ---------------------------------------------------------------------------
// TLM

struct TlmResult {
  double lhs;
  double rhs;
  bool satisfied;  ///< lhs <= rhs + 1e-12
};

TlmResult tlm_check(const CorrelationRecord& record);

// ---------------------------------------------------------------------------
// Randomized quantum trials: Haar-like two-qubit states and uniform settings.

struct TrialOutcome {
  double chsh_max;  ///< largest |S| over the four placements of the minus sign
  TlmResult tlm;
};

/// Trial k uses RNG substream k of `seed`, so both paths return the same vector.
std::vector<TrialOutcome> random_quantum_trials_serial(std::size_t trials, std::uint64_t seed);
std::vector<TrialOutcome> random_quantum_trials_omp(std::size_t trials, std::uint64_t seed);
std::vector<TrialOutcome> random_quantum_trials(std::size_t trials, std::uint64_t seed, Exec exec);

}  // namespace qfoundry::ineq
