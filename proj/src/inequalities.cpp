#include "qfoundry/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qfoundry/errors.hpp"

namespace qfoundry::ineq {
namespace {

using qcore::CMatrix;
using qcore::Complex;
using qcore::CVector;

constexpr double kPi = std::numbers::pi;

CMatrix pauli(int k) {
  CMatrix m(2, 2);
  switch (k) {
    case 0: m << 0.0, 1.0, 1.0, 0.0; break;
    case 1: m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0; break;
    default: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

void check_two_qubit(const StateVector& state) {
  if (state.dims() != qcore::Dims{2, 2}) throw ValidationError("expected a two-qubit state");
}

void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= kPi + 1e-12)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "phi = " << phi << " rad is outside [0, pi]";
    throw ValidationError(msg.str());
  }
}

CVector ket2(double x, double y) {
  CVector k(2);
  k << x, y;
  return k;
}

double joint_probability(const StateVector& state, const CVector& ket_a, const CVector& ket_b) {
  return qcore::measure_probability(state, qcore::projector(qcore::kron(ket_a, ket_b)));
}

}  // namespace

CorrelationRecord CorrelationRecord::from(const std::array<std::array<double, 2>, 2>& c) {
  for (const auto& row : c) {
    for (double v : row) {
      if (!(std::abs(v) <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "correlator " << v << " is outside [-1, 1]";
        throw ValidationError(msg.str());
      }
    }
  }
  CorrelationRecord r;
  r.c = c;
  return r;
}

CorrelationRecord CorrelationRecord::pr_box() { return from({{{1.0, 1.0}, {1.0, -1.0}}}); }

Eigen::Matrix3d correlation_tensor(const StateVector& state) {
  check_two_qubit(state);
  Eigen::Matrix3d t;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      t(k, l) = qcore::expectation(state, qcore::Observable(qcore::kron(pauli(k), pauli(l))));
    }
  }
  return t;
}

CorrelationRecord quantum_record(const StateVector& state, const std::array<MeasurementSetting, 2>& a,
                                 const std::array<MeasurementSetting, 2>& b) {
  check_two_qubit(state);
  const CMatrix id = qcore::identity(2);
  std::array<std::array<double, 2>, 2> c{};
  CorrelationRecord r;
  for (std::size_t i = 0; i < 2; ++i) {
    const CMatrix sa = qcore::spin_observable(a[i]).matrix();
    r.mean_a[i] = qcore::expectation(state, qcore::Observable(qcore::kron(sa, id)));
    for (std::size_t j = 0; j < 2; ++j) {
      const CMatrix sb = qcore::spin_observable(b[j]).matrix();
      c[i][j] = qcore::expectation(state, qcore::Observable(qcore::kron(sa, sb)));
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    r.mean_b[j] = qcore::expectation(state, qcore::Observable(qcore::kron(id, qcore::spin_observable(b[j]).matrix())));
  }
  r.c = CorrelationRecord::from(c).c;
  r.has_marginals = true;
  return r;
}

PolarizationProbabilities qm_same_polarization_probability(double theta_rel) {
  const double h = 1.0 / std::sqrt(2.0);
  CVector amps(4);
  amps << h, 0.0, 0.0, h;
  const StateVector state({2, 2}, amps);

  const CVector pass_a = ket2(1.0, 0.0);
  const CVector block_a = ket2(0.0, 1.0);
  const CVector pass_b = ket2(std::cos(theta_rel), std::sin(theta_rel));
  const CVector block_b = ket2(-std::sin(theta_rel), std::cos(theta_rel));

  PolarizationProbabilities p;
  p.p_both_pass = joint_probability(state, pass_a, pass_b);
  p.p_same = p.p_both_pass + joint_probability(state, block_a, block_b);
  p.cos2 = std::cos(theta_rel) * std::cos(theta_rel);
  return p;
}

double chsh_value(const CorrelationRecord& r) { return r.c[0][0] + r.c[0][1] + r.c[1][0] - r.c[1][1]; }

double leggett_bound(double phi) {
  check_phi(phi);
  return 4.0 - (4.0 / kPi) * std::abs(std::sin(0.5 * phi));
}

double leggett_quantum_value(double phi) {
  check_phi(phi);
  return std::abs(2.0 * (std::cos(phi) + 1.0));
}

LeggettSettings leggett_settings(double phi) {
  check_phi(phi);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const MeasurementSetting a2(Vec3(0.0, 1.0, 0.0));
  return LeggettSettings{
      MeasurementSetting(Vec3(1.0, 0.0, 0.0)),
      MeasurementSetting::normalized(Vec3(c, s, 0.0)),
      a2,
      MeasurementSetting::normalized(Vec3(0.0, c, s)),
      a2,
  };
}

double leggett_quantum_value_from_state(double phi) {
  const LeggettSettings s = leggett_settings(phi);
  const StateVector psi = qcore::singlet();
  auto e = [&psi](const MeasurementSetting& a, const MeasurementSetting& b) {
    return qcore::expectation(
        psi, qcore::Observable(qcore::kron(qcore::spin_observable(a).matrix(), qcore::spin_observable(b).matrix())));
  };
  const double e23 = e(s.a2, s.b3);
  return std::abs(e(s.a1, s.b1) + e23) + std::abs(e(s.a2, s.b2) + e23);
}

double leggett_gap_root() { return 2.0 * std::asin(1.0 / (2.0 * kPi)); }

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  if (!(hi >= lo)) throw ValidationError("empty grid: hi < lo");
  check_phi(lo);
  check_phi(hi);
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double phi = lo + static_cast<double>(k) * step;
    if (phi > hi + 0.5 * step) break;
    grid.push_back(std::min(phi, kPi));
  }
  return grid;
}

KcbsConfiguration kcbs_build_pentagram(double theta_offset) {
  const double cp = std::cos(kPi / 5.0);
  const double theta = std::acos(std::sqrt(cp / (1.0 + cp))) + theta_offset;
  KcbsConfiguration config;
  for (std::size_t j = 0; j < 5; ++j) {
    const double az = 4.0 * kPi * static_cast<double>(j) / 5.0;
    config.directions[j] = Vec3(std::sin(theta) * std::cos(az), std::sin(theta) * std::sin(az), std::cos(theta));
  }
  config.state = Vec3(0.0, 0.0, 1.0);
  return config;
}

double kcbs_adjacent_overlap(const KcbsConfiguration& config) {
  double worst = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    worst = std::max(worst, std::abs(config.directions[j].dot(config.directions[(j + 1) % 5])));
  }
  return worst;
}

double kcbs_correlator_sum(const KcbsConfiguration& config) {
  for (const auto& l : config.directions) {
    if (std::abs(l.norm() - 1.0) > qcore::kAlgebraTol) throw ValidationError("KCBS direction is not a unit vector");
  }
  const StateVector psi({3}, config.state.cast<Complex>());
  std::array<CMatrix, 5> ops;
  for (std::size_t j = 0; j < 5; ++j) {
    const CVector l = config.directions[j].cast<Complex>();
    ops[j] = qcore::Observable(qcore::identity(3) - 2.0 * l * l.adjoint(), "A" + std::to_string(j)).matrix();
  }
  double total = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    total += psi.amplitudes().dot(ops[j] * ops[(j + 1) % 5] * psi.amplitudes()).real();
  }
  return total;
}

double kcbs_value(const KcbsConfiguration& config) {
  const double overlap = kcbs_adjacent_overlap(config);
  if (overlap > 1e-10) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "KCBS adjacent directions are not orthogonal: max |l_j . l_j+1| = " << overlap;
    throw ValidationError(msg.str());
  }
  return kcbs_correlator_sum(config);
}

int kcbs_classical_minimum() {
  int best = 5;
  for (int mask = 0; mask < 32; ++mask) {
    int sum = 0;
    for (int j = 0; j < 5; ++j) {
      const int vj = (mask >> j) & 1 ? 1 : -1;
      const int vk = (mask >> ((j + 1) % 5)) & 1 ? 1 : -1;
      sum += vj * vk;
    }
    best = std::min(best, sum);
  }
  return best;
}

HardyConfiguration hardy_configuration(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 0.5 * kPi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "gamma = " << gamma << " rad is outside [0, pi/2]";
    throw ValidationError(msg.str());
  }
  const double c = std::cos(gamma);
  const double s = std::max(0.0, std::sin(gamma));
  HardyConfiguration h;
  h.gamma = gamma;
  h.n = 1.0 / std::sqrt(s + c);
  h.n_prime = 1.0 / std::sqrt(s * s * s + c * c * c);
  h.plus = h.n * ket2(std::sqrt(s), std::sqrt(c));
  h.minus = h.n * ket2(-std::sqrt(c), std::sqrt(s));
  h.plus_prime = h.n_prime * ket2(std::pow(c, 1.5), std::pow(s, 1.5));
  h.minus_prime = h.n_prime * ket2(-std::pow(s, 1.5), std::pow(c, 1.5));
  return h;
}

double hardy_p4_closed_form(double gamma) {
  const double c = std::cos(gamma);
  const double s = std::sin(gamma);
  const double r = std::sin(4.0 * gamma) / (4.0 * (c * c * c + s * s * s));
  return r * r;
}

HardyProbabilities hardy_probabilities(const HardyConfiguration& h) {
  const double c = std::cos(h.gamma);
  const double s = std::sin(h.gamma);
  CVector amps = CVector::Zero(4);
  amps(1) = c;
  amps(2) = -s;
  const StateVector state({2, 2}, amps);

  // Party B's kets carry |0> and |1> exchanged.
  auto swap01 = [](const CVector& k) {
    CVector out(2);
    out << k(1), k(0);
    return out;
  };

  HardyProbabilities p;
  p.p1 = joint_probability(state, h.plus, swap01(h.plus));
  p.p2 = joint_probability(state, h.minus, swap01(h.minus_prime));
  p.p3 = joint_probability(state, h.minus_prime, swap01(h.minus));
  p.p4 = joint_probability(state, h.minus_prime, swap01(h.minus_prime));
  p.p4_closed_form = hardy_p4_closed_form(h.gamma);
  p.separable = h.gamma == 0.0 || h.gamma == 0.5 * kPi;
  return p;
}

int hardy_classical_p4_count() {
  int count = 0;
  for (int mask = 0; mask < 16; ++mask) {
    const int alpha = mask & 1 ? 1 : -1;
    const int alpha_p = mask & 2 ? 1 : -1;
    const int beta = mask & 4 ? 1 : -1;
    const int beta_p = mask & 8 ? 1 : -1;
    const bool zero1 = !(alpha == 1 && beta == 1);
    const bool zero2 = !(alpha == -1 && beta_p == -1);
    const bool zero3 = !(alpha_p == -1 && beta == -1);
    if (zero1 && zero2 && zero3 && alpha_p == -1 && beta_p == -1) ++count;
  }
  return count;
}

TlmResult tlm_check(const CorrelationRecord& r) {
  const auto& c = r.c;
  TlmResult t;
  t.lhs = std::abs(c[0][0] * c[1][0] - c[0][1] * c[1][1]);
  t.rhs = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    t.rhs += std::sqrt(std::max(0.0, (1.0 - c[0][j] * c[0][j]) * (1.0 - c[1][j] * c[1][j])));
  }
  t.satisfied = t.lhs <= t.rhs + 1e-12;
  return t;
}

}  // namespace qfoundry::ineq
