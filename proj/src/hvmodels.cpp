#include "qfoundry/hvmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qfoundry/errors.hpp"

namespace qfoundry::hv {
namespace {

constexpr double kSlack = 1e-12;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lambda = " << lambda << " is outside [0, 1]";
    throw ValidationError(msg.str());
  }
}

int table_setting_index(const MeasurementSetting& s) {
  const auto settings = polarizer_settings();
  for (int i = 0; i < 3; ++i) {
    if ((settings[static_cast<std::size_t>(i)].direction() - s.direction()).norm() < 1e-9) return i;
  }
  throw ValidationError("table rule: setting is not one of the three polarizer directions");
}

}  // namespace

int poincare_lambda(double phi) {
  constexpr double kPi = std::numbers::pi;
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "phi = " << phi << " is outside [0, 2pi)";
    throw ValidationError(msg.str());
  }
  return phi <= kPi ? +1 : -1;
}

Averages integrate_uniform(const HiddenVariableOutcomeRule& rule, const MeasurementSetting& a,
                           const MeasurementSetting& b) {
  std::vector<double> cuts = rule.breakpoints(a, b);
  cuts.push_back(0.0);
  cuts.push_back(1.0);
  for (double& c : cuts) c = std::clamp(c, 0.0, 1.0);
  std::sort(cuts.begin(), cuts.end());

  Averages avg{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    if (width <= 0.0) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const int oa = rule.outcome_a(a, b, mid);
    const int ob = rule.outcome_b(a, b, mid);
    avg.mean_a += width * oa;
    avg.mean_b += width * ob;
    avg.mean_ab += width * oa * ob;
  }
  return avg;
}

bool respects_locality(const HiddenVariableOutcomeRule& rule, std::span<const MeasurementSetting> settings,
                       std::span<const double> lambdas) {
  for (const auto& own : settings) {
    for (double lambda : lambdas) {
      const int a_ref = rule.outcome_a(own, settings.front(), lambda);
      const int b_ref = rule.outcome_b(settings.front(), own, lambda);
      for (const auto& other : settings) {
        if (rule.outcome_a(own, other, lambda) != a_ref) return false;
        if (rule.outcome_b(other, own, lambda) != b_ref) return false;
      }
    }
  }
  return true;
}

LocalHVTable::LocalHVTable(const std::array<double, kRowCount>& weights) : weights_(weights) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw ValidationError("table weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kSlack) throw ValidationError("table weights must sum to 1");
}

LocalHVTable LocalHVTable::uniform() {
  std::array<double, kRowCount> w;
  w.fill(1.0 / kRowCount);
  return LocalHVTable(w);
}

LocalHVTable LocalHVTable::vertex(std::size_t row) {
  if (row >= kRowCount) throw ValidationError("table row out of range");
  std::array<double, kRowCount> w{};
  w[row] = 1.0;
  return LocalHVTable(w);
}

int LocalHVTable::same_count(std::size_t row) {
  const Row& r = kRows.at(row);
  return int{r[0] == r[1]} + int{r[1] == r[2]} + int{r[2] == r[0]};
}

double lhv_same_probability(const LocalHVTable& table) {
  double p = 0.0;
  for (std::size_t row = 0; row < LocalHVTable::kRowCount; ++row) {
    p += table.weights()[row] * LocalHVTable::same_count(row) / 3.0;
  }
  return p;
}

Fraction lhv_minimum_same_probability(std::span<const std::size_t> rows) {
  if (rows.empty()) throw ValidationError("row subset is empty");
  int best = 3;
  for (std::size_t row : rows) {
    if (row >= LocalHVTable::kRowCount) throw ValidationError("table row out of range");
    best = std::min(best, LocalHVTable::same_count(row));
  }
  return Fraction{best, 3};
}

Fraction lhv_minimum_same_probability() {
  constexpr std::array<std::size_t, 8> all{0, 1, 2, 3, 4, 5, 6, 7};
  return lhv_minimum_same_probability(all);
}

std::array<MeasurementSetting, 3> polarizer_settings() {
  constexpr double kThird = 2.0 * std::numbers::pi / 3.0;
  auto at = [](double physical) {
    return MeasurementSetting(qcore::Vec3(std::cos(2.0 * physical), std::sin(2.0 * physical), 0.0));
  };
  return {at(0.0), at(kThird), at(-kThird)};
}

HiddenVariableOutcomeRule table_rule(const LocalHVTable& table) {
  std::array<double, LocalHVTable::kRowCount> cumulative{};
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    acc += table.weights()[i];
    cumulative[i] = acc;
  }
  auto row_of = [cumulative](double lambda) {
    check_lambda(lambda);
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
      if (lambda < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
  };
  auto outcome = [row_of](const MeasurementSetting& own, double lambda) {
    return LocalHVTable::kRows[row_of(lambda)][static_cast<std::size_t>(table_setting_index(own))] ? +1 : -1;
  };
  return HiddenVariableOutcomeRule{
      RuleKind::Local,
      [outcome](const MeasurementSetting& a, const MeasurementSetting&, double l) { return outcome(a, l); },
      [outcome](const MeasurementSetting&, const MeasurementSetting& b, double l) { return outcome(b, l); },
      [cumulative](const MeasurementSetting&, const MeasurementSetting&) {
        return std::vector<double>(cumulative.begin(), cumulative.end());
      },
  };
}

HiddenVariableOutcomeRule malus_local_rule(const MeasurementSetting& u, const MeasurementSetting& v) {
  return HiddenVariableOutcomeRule{
      RuleKind::Local,
      [u](const MeasurementSetting& a, const MeasurementSetting&, double l) {
        check_lambda(l);
        return l <= 0.5 * (1.0 + u.dot(a)) ? +1 : -1;
      },
      [v](const MeasurementSetting&, const MeasurementSetting& b, double l) {
        check_lambda(l);
        return l <= 0.5 * (1.0 + v.dot(b)) ? +1 : -1;
      },
      [u, v](const MeasurementSetting& a, const MeasurementSetting& b) {
        return std::vector<double>{0.5 * (1.0 + u.dot(a)), 0.5 * (1.0 + v.dot(b))};
      },
  };
}

LeggettThresholds leggett_thresholds(const LeggettModelParams& p) {
  const double ua = p.u.dot(p.a);
  const double vb = p.v.dot(p.b);
  const double ab = p.a.dot(p.b);
  return LeggettThresholds{
      0.5 * (1.0 + ua),
      0.25 * (1.0 + ua - vb + ab),
      0.25 * (3.0 + ua + vb + ab),
  };
}

bool leggett_consistent(const LeggettModelParams& p) {
  const double ua = p.u.dot(p.a);
  const double vb = p.v.dot(p.b);
  const double ab = p.a.dot(p.b);
  return std::abs(ab + ua) <= 1.0 - vb + kSlack && std::abs(ab - ua) <= 1.0 + vb + kSlack;
}

OutcomePair leggett_outcomes(const LeggettModelParams& params, double lambda) {
  check_lambda(lambda);
  if (!leggett_consistent(params)) {
    const double ua = params.u.dot(params.a);
    const double vb = params.v.dot(params.b);
    const double ab = params.a.dot(params.b);
    std::ostringstream msg;
    msg.precision(17);
    msg << "Leggett model inconsistent for these settings: |a.b + u.a| = " << std::abs(ab + ua)
        << " vs 1 - v.b = " << 1.0 - vb << ", |a.b - u.a| = " << std::abs(ab - ua) << " vs 1 + v.b = " << 1.0 + vb;
    throw ModelInconsistent(msg.str());
  }
  const LeggettThresholds t = leggett_thresholds(params);
  return OutcomePair{
      lambda <= t.lambda_a ? +1 : -1,
      (lambda >= t.x1 && lambda <= t.x2) ? +1 : -1,
  };
}

HiddenVariableOutcomeRule leggett_rule(const MeasurementSetting& u, const MeasurementSetting& v) {
  return HiddenVariableOutcomeRule{
      RuleKind::CryptoNonlocal,
      [u, v](const MeasurementSetting& a, const MeasurementSetting& b, double l) {
        return leggett_outcomes({u, v, a, b}, l).a;
      },
      [u, v](const MeasurementSetting& a, const MeasurementSetting& b, double l) {
        return leggett_outcomes({u, v, a, b}, l).b;
      },
      [u, v](const MeasurementSetting& a, const MeasurementSetting& b) {
        const LeggettThresholds t = leggett_thresholds({u, v, a, b});
        return std::vector<double>{t.lambda_a, t.x1, t.x2};
      },
  };
}

Expectations leggett_expectations(const LeggettModelParams& params, const Method& method, Exec exec) {
  if (!leggett_consistent(params)) {
    // Reuse the detailed message.
    leggett_outcomes(params, 0.0);
  }
  if (std::holds_alternative<Analytic>(method)) {
    const Averages avg = integrate_uniform(leggett_rule(params.u, params.v), params.a, params.b);
    return Expectations{avg.mean_a, avg.mean_b, avg.mean_ab};
  }
  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.samples < 2) throw ValidationError("samples must be >= 2");
  const OutcomeSums sums = exec == Exec::Serial ? sample_leggett_serial(params, mc.samples, mc.seed)
                                                : sample_leggett_omp(params, mc.samples, mc.seed);
  const auto n = static_cast<double>(sums.count);
  Expectations e;
  e.mean_a = static_cast<double>(sums.sum_a) / n;
  e.mean_b = static_cast<double>(sums.sum_b) / n;
  e.mean_ab = static_cast<double>(sums.sum_ab) / n;
  // +-1 outcomes: sample variance is n/(n-1) * (1 - mean^2).
  auto standard_error = [n](double mean) { return std::sqrt(std::max(0.0, 1.0 - mean * mean) / (n - 1.0)); };
  e.stderr_a = standard_error(e.mean_a);
  e.stderr_b = standard_error(e.mean_b);
  e.stderr_ab = standard_error(e.mean_ab);
  e.samples = sums.count;
  return e;
}

std::vector<MeasurementSetting> fibonacci_sphere(std::size_t n) {
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<MeasurementSetting> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * static_cast<double>(i);
    points.push_back(MeasurementSetting::normalized(qcore::Vec3(r * std::cos(phi), r * std::sin(phi), z)));
  }
  return points;
}

std::vector<LeggettModelParams> leggett_grid_scenarios(std::size_t n) {
  const std::vector<MeasurementSetting> grid = fibonacci_sphere(n);
  std::vector<LeggettModelParams> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MeasurementSetting& a = grid[i];
    const MeasurementSetting& b = grid[(i + 1) % n];
    const MeasurementSetting fallback = MeasurementSetting::normalized(a.direction().cross(b.direction()));
    LeggettModelParams chosen{fallback, fallback, a, b};
    for (std::size_t step = 0; step < n; ++step) {
      const MeasurementSetting& u = grid[(i * 37 + 11 + step) % n];
      const LeggettModelParams candidate{u, u, a, b};
      if (std::abs(u.dot(a)) >= 0.1 && leggett_consistent(candidate)) {
        chosen = candidate;
        break;
      }
    }
    out.push_back(chosen);
  }
  return out;
}

}  // namespace qfoundry::hv
