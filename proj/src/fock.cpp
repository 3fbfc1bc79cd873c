#include "qfoundry/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfoundry/errors.hpp"

namespace qfoundry::fock {
namespace {

double factorial(int n) { return std::tgamma(static_cast<double>(n) + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

// Coefficients of (x a + y b)^n as a polynomial in a: entry k multiplies a^k b^(n-k).
std::vector<double> power_expansion(double x, double y, int n) {
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = binomial(n, k) * std::pow(x, k) * std::pow(y, n - k);
  return c;
}

}  // namespace

FockState::FockState(int n_max, ModeLabels labels) : n_max_(n_max), labels_(std::move(labels)) {
  if (n_max_ < 0) throw ValidationError("n_max must be >= 0");
  amps_.assign(static_cast<std::size_t>((n_max_ + 1) * (n_max_ + 2) / 2), Complex(0.0));
  amps_[index(0, 0)] = 1.0;
}

FockState FockState::number(int na, int nb, int n_max, ModeLabels labels) {
  FockState s(n_max, std::move(labels));
  s.set_amplitude(0, 0, 0.0);
  s.set_amplitude(na, nb, 1.0);
  return s;
}

std::size_t FockState::index(int na, int nb) const {
  if (na < 0 || nb < 0 || na + nb > n_max_) {
    std::ostringstream msg;
    msg << "occupation (" << na << ", " << nb << ") is outside the truncation n_max = " << n_max_;
    throw ValidationError(msg.str());
  }
  // Blocks by total number n = na + nb; within a block, nb ascending.
  const int n = na + nb;
  return static_cast<std::size_t>(n * (n + 1) / 2 + nb);
}

Complex FockState::amplitude(int na, int nb) const { return amps_[index(na, nb)]; }

void FockState::set_amplitude(int na, int nb, Complex value) { amps_[index(na, nb)] = value; }

double FockState::norm() const {
  double s = 0.0;
  for (const Complex& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

FockState FockState::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw ValidationError("cannot normalize the zero Fock vector");
  FockState out = *this;
  for (Complex& a : out.amps_) a /= n;
  return out;
}

bool FockState::is_normalized(double tol) const { return std::abs(norm() * norm() - 1.0) <= tol; }

std::vector<std::pair<std::pair<int, int>, Complex>> FockState::terms(double tol) const {
  std::vector<std::pair<std::pair<int, int>, Complex>> out;
  for (int n = 0; n <= n_max_; ++n) {
    for (int na = n; na >= 0; --na) {
      const Complex a = amplitude(na, n - na);
      if (std::abs(a) > tol) out.push_back({{na, n - na}, a});
    }
  }
  return out;
}

FockState FockState::relabeled(ModeLabels labels) const {
  FockState out = *this;
  out.labels_ = std::move(labels);
  return out;
}

FockState create(const FockState& state, Mode mode) {
  FockState out(state.n_max(), state.labels());
  out.set_amplitude(0, 0, 0.0);
  for (const auto& [occ, amp] : state.terms()) {
    const auto [na, nb] = occ;
    const int ta = mode == Mode::A ? na + 1 : na;
    const int tb = mode == Mode::B ? nb + 1 : nb;
    if (ta + tb > state.n_max()) {
      std::ostringstream msg;
      msg << "creation on (" << na << ", " << nb << ") exceeds n_max = " << state.n_max();
      throw TruncationOverflow(msg.str());
    }
    const int n = mode == Mode::A ? na : nb;
    out.set_amplitude(ta, tb, amp * std::sqrt(static_cast<double>(n) + 1.0));
  }
  return out;
}

FockState annihilate(const FockState& state, Mode mode) {
  FockState out(state.n_max(), state.labels());
  out.set_amplitude(0, 0, 0.0);
  for (const auto& [occ, amp] : state.terms()) {
    const auto [na, nb] = occ;
    const int n = mode == Mode::A ? na : nb;
    if (n == 0) continue;
    out.set_amplitude(mode == Mode::A ? na - 1 : na, mode == Mode::B ? nb - 1 : nb,
                      amp * std::sqrt(static_cast<double>(n)));
  }
  return out;
}

ModeRotation ModeRotation::pbs(double angle) { return {RotationConvention::PbsAtAngle, angle}; }

ModeRotation ModeRotation::beam_splitter(double angle) { return {RotationConvention::BeamSplitter5050, angle}; }

Eigen::Matrix2d ModeRotation::matrix() const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Eigen::Matrix2d m;
  if (convention == RotationConvention::PbsAtAngle) {
    m << c, s, s, -c;
  } else {
    m << c, s, -s, c;
  }
  return m;
}

ModeRotation ModeRotation::inverse() const {
  if (convention == RotationConvention::PbsAtAngle) return *this;
  return {convention, -angle};
}

FockState apply_rotation(const FockState& state, const ModeRotation& rotation) {
  return apply_rotation(state, rotation, state.labels());
}

FockState apply_rotation(const FockState& state, const ModeRotation& rotation, ModeLabels out_labels) {
  const Eigen::Matrix2d m = rotation.matrix();
  FockState out(state.n_max(), std::move(out_labels));
  out.set_amplitude(0, 0, 0.0);
  // |na, nb> = (a^dag)^na (b^dag)^nb |0> / sqrt(na! nb!)
  for (const auto& [occ, amp] : state.terms()) {
    const auto [na, nb] = occ;
    const std::vector<double> pa = power_expansion(m(0, 0), m(0, 1), na);
    const std::vector<double> pb = power_expansion(m(1, 0), m(1, 1), nb);
    const double norm_in = std::sqrt(factorial(na) * factorial(nb));
    for (int i = 0; i <= na; ++i) {
      for (int j = 0; j <= nb; ++j) {
        const int p = i + j;
        const int q = na + nb - p;
        const double coeff = pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)];
        if (coeff == 0.0) continue;
        out.set_amplitude(p, q, out.amplitude(p, q) + amp * coeff * std::sqrt(factorial(p) * factorial(q)) / norm_in);
      }
    }
  }
  return out;
}

double coincidence_probability(const FockState& state) {
  if (!state.is_normalized()) throw ValidationError("coincidence_probability needs a normalized state");
  if (state.n_max() < 2) return 0.0;
  return std::norm(state.amplitude(1, 1));
}

FockState noon(int n, int n_max, ModeLabels labels) {
  if (n < 1 || n > n_max) throw ValidationError("N00N photon number must be in [1, n_max]");
  FockState s(n_max, std::move(labels));
  const double h = 1.0 / std::sqrt(2.0);
  s.set_amplitude(0, 0, 0.0);
  s.set_amplitude(n, 0, h);
  s.set_amplitude(0, n, h);
  return s;
}

qcore::StateVector photon_atoms_entangle(const FockState& single_photon) {
  if (!single_photon.is_normalized()) throw ValidationError("photon state is not normalized");
  for (const auto& [occ, amp] : single_photon.terms(qcore::kAlgebraTol)) {
    if (occ.first + occ.second != 1) {
      std::ostringstream msg;
      msg << "photon state has weight on (" << occ.first << ", " << occ.second
          << "); expected a single photon over two paths";
      throw ValidationError(msg.str());
    }
  }
  qcore::CVector amps = qcore::CVector::Zero(4);
  amps(2) = single_photon.amplitude(1, 0);  // |e g>
  amps(1) = single_photon.amplitude(0, 1);  // |g e>
  return qcore::StateVector::normalized({2, 2}, amps);
}

qcore::StateVector first_quantized(const FockState& two_photons) {
  qcore::CVector amps = qcore::CVector::Zero(4);
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& [occ, amp] : two_photons.terms()) {
    if (occ.first + occ.second != 2) throw ValidationError("first_quantized expects exactly two photons per term");
    if (occ.first == 2) amps(0) += amp;
    if (occ.second == 2) amps(3) += amp;
    if (occ.first == 1) {
      amps(1) += h * amp;
      amps(2) += h * amp;
    }
  }
  return qcore::StateVector({2, 2}, amps);
}

qcore::StateVector relabel_first_quantized(const qcore::StateVector& two_particles, const ModeRotation& rotation) {
  if (two_particles.dims() != qcore::Dims{2, 2}) throw ValidationError("expected two one-photon particles");
  // |in_i> -> sum_j M(i, j) |out_j>, so the ket transform is M^T.
  const qcore::CMatrix u = rotation.matrix().transpose().cast<Complex>();
  return qcore::apply_local(qcore::apply_local(two_particles, u, 0), u, 1);
}

}  // namespace qfoundry::fock
