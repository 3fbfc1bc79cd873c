#include "qfoundry/popper.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "qfoundry/errors.hpp"

namespace qfoundry::popper {
namespace {

constexpr double kDriftLimit = 1e-6;
constexpr double kEdgeLimit = 1e-6;

double min_sigma(const GaussianPairState& s) { return std::min(s.sigma_plus, s.sigma_minus); }
double max_sigma(const GaussianPairState& s) { return std::max(s.sigma_plus, s.sigma_minus); }

void validate_spec(const GridSpec& spec) {
  if (spec.points_per_scale < 1) throw ValidationError("points_per_scale must be >= 1");
  if (!(spec.extent_factor > 0.0)) throw ValidationError("extent_factor must be positive");
}

struct Moments {
  double mean;
  double variance;
};

Moments position_moments(const std::vector<double>& phi, const Grid& grid) {
  double w = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double p = phi[i] * phi[i];
    w += p;
    m1 += p * grid.x(i);
  }
  const double mean = m1 / w;
  double var = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double d = grid.x(i) - mean;
    var += phi[i] * phi[i] * d * d;
  }
  return {mean, var / w};
}

double frequency(std::size_t k, const Grid& grid) {
  const auto n = static_cast<double>(grid.n);
  const double kk = k < grid.n / 2 ? static_cast<double>(k) : static_cast<double>(k) - n;
  return 2.0 * std::numbers::pi * kk / (n * grid.spacing);
}

// Unnormalized sums over |Phi_k|^2: weight, first and second moments of p.
struct SpectrumSums {
  double w = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

SpectrumSums spectrum_sums(Eigen::FFT<double>& fft, const std::vector<double>& phi, const Grid& grid) {
  std::vector<std::complex<double>> in(phi.begin(), phi.end());
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  SpectrumSums s;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double pk = frequency(k, grid);
    const double w = std::norm(out[k]);
    s.w += w;
    s.p1 += w * pk;
    s.p2 += w * pk * pk;
  }
  return s;
}

double momentum_variance(const SpectrumSums& s) {
  const double mean = s.p1 / s.w;
  return std::max(0.0, s.p2 / s.w - mean * mean);
}

double norm_drift(const std::vector<double>& phi, const Grid& grid) {
  double full = 0.0, even = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double p = phi[i] * phi[i];
    full += p;
    if (i % 2 == 0) even += p;
  }
  full *= grid.spacing;
  even *= 2.0 * grid.spacing;
  return std::abs(full - even) / full;
}

void check_resolution(const std::vector<double>& phi, const Grid& grid, const GridSpec& spec, double drift) {
  double peak = 0.0;
  for (double v : phi) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw ResolutionError("conditional amplitude vanishes on the grid; the slit misses the state");
  const double edge = std::max(std::abs(phi.front()), std::abs(phi.back())) / peak;
  std::ostringstream msg;
  msg.precision(6);
  if (drift > kDriftLimit) {
    msg << "grid under-resolved: norm drift " << drift << " > " << kDriftLimit << " at " << spec.points_per_scale
        << " points per scale (spacing " << grid.spacing << ")";
    throw ResolutionError(msg.str());
  }
  if (edge > kEdgeLimit) {
    msg << "grid too short: amplitude at the edge is " << edge << " of the peak (half extent " << grid.half_extent
        << ")";
    throw ResolutionError(msg.str());
  }
}

void add_trapezoid(Quadrature& q, double lo, double hi, double h_max) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / h_max)));
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    q.nodes.push_back(lo + static_cast<double>(k) * h);
    q.weights.push_back(k == 0 || k == n ? 0.5 * h : h);
  }
}

void add_simpson(Quadrature& q, double lo, double hi, double h_max) {
  auto n = static_cast<std::size_t>(std::max(2.0, std::ceil((hi - lo) / h_max)));
  if (n % 2 == 1) ++n;
  const double h = (hi - lo) / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    q.nodes.push_back(lo + static_cast<double>(k) * h);
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    q.weights.push_back(w * h / 3.0);
  }
}

}  // namespace

void GaussianPairState::validate() const {
  if (!(sigma_plus > 0.0 && std::isfinite(sigma_plus))) throw ValidationError("sigma_plus must be positive");
  if (!(sigma_minus > 0.0 && std::isfinite(sigma_minus))) throw ValidationError("sigma_minus must be positive");
}

double GaussianPairState::amplitude(double x1, double x2) const {
  const double s = x1 + x2;
  const double d = x1 - x2;
  return std::exp(-s * s / (8.0 * sigma_plus * sigma_plus) - d * d / (8.0 * sigma_minus * sigma_minus));
}

void SlitCondition::validate() const {
  if (!(width > 0.0 && std::isfinite(width))) throw ValidationError("slit width must be positive");
  if (!std::isfinite(center)) throw ValidationError("slit center must be finite");
}

double SlitCondition::transmission(double x) const {
  const double d = x - center;
  if (profile == SlitProfile::Gaussian) return std::exp(-d * d / (4.0 * width * width));
  return std::abs(d) <= 0.5 * width ? 1.0 : 0.0;
}

double matched_gaussian_width(double hard_width) { return hard_width / std::sqrt(12.0); }

Grid make_grid(const GaussianPairState& state, const SlitCondition* slit, const GridSpec& spec) {
  state.validate();
  validate_spec(spec);
  const double half = spec.extent_factor * max_sigma(state) + (slit ? std::abs(slit->center) : 0.0);
  const double h_max = min_sigma(state) / spec.points_per_scale;
  std::size_t n = 2;
  while (static_cast<double>(n) * h_max < 2.0 * half) n *= 2;
  return Grid{n, half, 2.0 * half / static_cast<double>(n)};
}

Quadrature slit_quadrature(const GaussianPairState& state, const SlitCondition& slit, const Grid& grid,
                           const GridSpec& spec) {
  const double h_max = std::min(min_sigma(state), slit.width) / spec.points_per_scale;
  const double reach = 2.0 * grid.half_extent;
  Quadrature q;
  if (slit.profile == SlitProfile::Gaussian) {
    const double lo = std::max(slit.center - 10.0 * slit.width, -reach);
    const double hi = std::min(slit.center + 10.0 * slit.width, reach);
    if (hi <= lo) throw ResolutionError("slit lies outside the integration range");
    add_trapezoid(q, lo, hi, h_max);
  } else {
    const double lo = std::max(slit.center - 0.5 * slit.width, -reach);
    const double hi = std::min(slit.center + 0.5 * slit.width, reach);
    if (hi <= lo) throw ResolutionError("slit lies outside the integration range");
    add_simpson(q, lo, hi, h_max);
  }
  return q;
}

Uncertainties conditional_uncertainties(const GaussianPairState& state, const SlitCondition& slit,
                                        const GridSpec& spec, Exec exec) {
  state.validate();
  slit.validate();
  const Grid grid = make_grid(state, &slit, spec);
  const Quadrature q = slit_quadrature(state, slit, grid, spec);
  const std::vector<double> phi = exec == Exec::Serial ? conditional_amplitude_serial(state, slit, grid, q)
                                                       : conditional_amplitude_omp(state, slit, grid, q);
  const double drift = norm_drift(phi, grid);
  check_resolution(phi, grid, spec, drift);

  Eigen::FFT<double> fft;
  const double dx = std::sqrt(position_moments(phi, grid).variance);
  const double dp = std::sqrt(momentum_variance(spectrum_sums(fft, phi, grid)));
  return Uncertainties{dx, dp, dx * dp, grid.n, grid.spacing, drift};
}

Uncertainties unconditioned_uncertainties(const GaussianPairState& state, const GridSpec& spec) {
  const Grid grid = make_grid(state, nullptr, spec);
  Eigen::FFT<double> fft;
  std::vector<double> row(grid.n);
  std::vector<double> marginal(grid.n, 0.0);
  SpectrumSums total;
  double drift = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x1 = grid.x(i);
    for (std::size_t j = 0; j < grid.n; ++j) row[j] = state.amplitude(x1, grid.x(j));
    for (std::size_t j = 0; j < grid.n; ++j) marginal[j] += row[j] * row[j];
    const SpectrumSums s = spectrum_sums(fft, row, grid);
    total.w += s.w;
    total.p1 += s.p1;
    total.p2 += s.p2;
  }
  // Marginal probability as a pseudo-amplitude, so the same moment and drift code applies.
  std::vector<double> amp(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) amp[j] = std::sqrt(marginal[j]);
  drift = norm_drift(amp, grid);
  check_resolution(amp, grid, spec, drift);
  const double dx = std::sqrt(position_moments(amp, grid).variance);
  const double dp = std::sqrt(momentum_variance(total));
  return Uncertainties{dx, dp, dx * dp, grid.n, grid.spacing, drift};
}

}  // namespace qfoundry::popper
