#pragma once

// Hidden-variable models. The shared variable lambda is uniform on [0, 1] for
// every rule in this module; outcome rules are piecewise constant in lambda.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "qfoundry/exec.hpp"
#include "qfoundry/qcore.hpp"

namespace qfoundry::hv {

using qcore::MeasurementSetting;

/// Sign of the y polarization for a vector at azimuth phi in [0, 2pi).
/// Both printed cases include pi; the first case wins, so phi == pi gives +1.
int poincare_lambda(double phi);

enum class RuleKind { Local, CryptoNonlocal };

/// A deterministic (a, b, lambda) -> +-1 outcome rule for each party.
/// Neither outcome function sees the other party's outcome.
struct HiddenVariableOutcomeRule {
  using OutcomeFn = std::function<int(const MeasurementSetting& a, const MeasurementSetting& b, double lambda)>;
  using BreakpointFn = std::function<std::vector<double>(const MeasurementSetting& a, const MeasurementSetting& b)>;

  RuleKind kind;
  OutcomeFn outcome_a;
  OutcomeFn outcome_b;
  /// Every lambda in (0, 1) where outcome_a or outcome_b can change for these settings.
  BreakpointFn breakpoints;
};

struct Averages {
  double mean_a;
  double mean_b;
  double mean_ab;
};

/// Exact averages over uniform lambda: sums segment lengths between breakpoints.
Averages integrate_uniform(const HiddenVariableOutcomeRule& rule, const MeasurementSetting& a,
                           const MeasurementSetting& b);

/// True when no outcome changes if the other party's setting is swapped for any other in `settings`.
bool respects_locality(const HiddenVariableOutcomeRule& rule, std::span<const MeasurementSetting> settings,
                       std::span<const double> lambdas);

/// Deterministic pass/block assignments for the three polarizers (0, +2pi/3, -2pi/3), all 8 of them,
/// with a probability weight per row. Both photons of a pair carry the same row.
class LocalHVTable {
 public:
  using Row = std::array<bool, 3>;
  static constexpr std::size_t kRowCount = 8;

  static constexpr std::array<Row, kRowCount> kRows = {{
      {true, true, true},
      {true, true, false},
      {true, false, true},
      {true, false, false},
      {false, true, true},
      {false, true, false},
      {false, false, true},
      {false, false, false},
  }};

  /// Weights must be nonnegative and sum to 1 within 1e-12.
  explicit LocalHVTable(const std::array<double, kRowCount>& weights);

  static LocalHVTable uniform();
  /// All weight on one row (0-based).
  static LocalHVTable vertex(std::size_t row);

  const std::array<double, kRowCount>& weights() const { return weights_; }

  /// How many of the setting pairs (a1 b2), (a2 b3), (a3 b1) give equal outcomes for this row.
  static int same_count(std::size_t row);

 private:
  std::array<double, kRowCount> weights_;
};

struct Fraction {
  long numerator;
  long denominator;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  friend bool operator==(const Fraction& x, const Fraction& y) {
    return x.numerator * y.denominator == y.numerator * x.denominator;
  }
};

/// Weighted probability that the two photons give the same result when the pair of settings is
/// drawn uniformly from (a1 b2), (a2 b3), (a3 b1).
double lhv_same_probability(const LocalHVTable& table);

/// Minimum of lhv_same_probability over the weight simplex. The objective is affine in the
/// weights, so the minimum sits on a vertex and is computed exactly as a fraction.
Fraction lhv_minimum_same_probability();
/// Same, with the simplex restricted to the given rows (0-based).
Fraction lhv_minimum_same_probability(std::span<const std::size_t> rows);

/// Poincare-sphere directions of the polarizers at 0, +2pi/3, -2pi/3 (sphere angle is twice the physical angle).
std::array<MeasurementSetting, 3> polarizer_settings();

/// Local rule that draws a table row from lambda by cumulative weight. Settings must be polarizer_settings().
HiddenVariableOutcomeRule table_rule(const LocalHVTable& table);

/// Local Malus-law rule with source polarizations u, v: A = +1 iff lambda <= (1 + u.a)/2,
/// B = +1 iff lambda <= (1 + v.b)/2.
HiddenVariableOutcomeRule malus_local_rule(const MeasurementSetting& u, const MeasurementSetting& v);

// ---------------------------------------------------------------------------
// Leggett-type crypto-nonlocal model

struct LeggettModelParams {
  MeasurementSetting u;  ///< initial polarization of photon A
  MeasurementSetting v;  ///< initial polarization of photon B
  MeasurementSetting a;  ///< analyzer A
  MeasurementSetting b;  ///< analyzer B
};

struct LeggettThresholds {
  double lambda_a;  ///< (1 + u.a)/2
  double x1;        ///< (1 + u.a - v.b + a.b)/4
  double x2;        ///< (3 + u.a + v.b + a.b)/4
};

LeggettThresholds leggett_thresholds(const LeggettModelParams& params);

/// |a.b + u.a| <= 1 - v.b and |a.b - u.a| <= 1 + v.b, with 1e-12 slack.
/// Equivalent to 0 <= x1 <= lambda_a <= x2 <= 1.
bool leggett_consistent(const LeggettModelParams& params);

struct OutcomePair {
  int a;
  int b;
};

/// A = +1 on [0, lambda_a], B = +1 on [x1, x2]; closed intervals win ties.
/// Throws ModelInconsistent when leggett_consistent() fails.
OutcomePair leggett_outcomes(const LeggettModelParams& params, double lambda);

/// The same model packaged as a crypto-nonlocal rule: B depends on a as well as b.
HiddenVariableOutcomeRule leggett_rule(const MeasurementSetting& u, const MeasurementSetting& v);

struct Analytic {};
struct MonteCarlo {
  std::uint64_t samples;
  std::uint64_t seed;
};
using Method = std::variant<Analytic, MonteCarlo>;

struct Expectations {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_ab = 0.0;
  double stderr_a = 0.0;  ///< zero for Analytic
  double stderr_b = 0.0;
  double stderr_ab = 0.0;
  std::uint64_t samples = 0;  ///< zero for Analytic
};

/// Analytic integrates the outcome rules exactly over uniform lambda. MonteCarlo samples lambda
/// with kSamplerShards fixed substreams, so the result depends only on (samples, seed).
Expectations leggett_expectations(const LeggettModelParams& params, const Method& method,
                                  Exec exec = Exec::Parallel);

// Sampler kernels. Outcome sums are integers, so both paths agree exactly.
inline constexpr std::uint64_t kSamplerShards = 64;

struct OutcomeSums {
  std::int64_t sum_a = 0;
  std::int64_t sum_b = 0;
  std::int64_t sum_ab = 0;
  std::uint64_t count = 0;
};

OutcomeSums sample_leggett_serial(const LeggettModelParams& params, std::uint64_t samples, std::uint64_t seed);
OutcomeSums sample_leggett_omp(const LeggettModelParams& params, std::uint64_t samples, std::uint64_t seed);

/// n near-uniform unit vectors on the sphere (golden-angle spiral).
std::vector<MeasurementSetting> fibonacci_sphere(std::size_t n);

/// One consistent scenario per point a of fibonacci_sphere(n): b is the next grid point and
/// u = v is the first grid point, searched from a fixed offset, that satisfies the consistency
/// inequality with |u.a| >= 0.1. Points without such a u get u = v = a x b (normalized).
std::vector<LeggettModelParams> leggett_grid_scenarios(std::size_t n = 97);

}  // namespace qfoundry::hv
