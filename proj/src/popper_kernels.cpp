#include <cstdint>

#include "qfoundry/popper.hpp"

namespace qfoundry::popper {
namespace {

std::vector<double> weighted_transmission(const SlitCondition& slit, const Quadrature& q) {
  std::vector<double> wt(q.nodes.size());
  for (std::size_t k = 0; k < wt.size(); ++k) wt[k] = q.weights[k] * slit.transmission(q.nodes[k]);
  return wt;
}

double point(const GaussianPairState& state, const Quadrature& q, const std::vector<double>& wt, double x2) {
  double sum = 0.0;
  for (std::size_t k = 0; k < wt.size(); ++k) sum += wt[k] * state.amplitude(q.nodes[k], x2);
  return sum;
}

}  // namespace

std::vector<double> conditional_amplitude_serial(const GaussianPairState& state, const SlitCondition& slit,
                                                 const Grid& grid, const Quadrature& q) {
  const std::vector<double> wt = weighted_transmission(slit, q);
  std::vector<double> phi(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) phi[i] = point(state, q, wt, grid.x(i));
  return phi;
}

std::vector<double> conditional_amplitude_omp(const GaussianPairState& state, const SlitCondition& slit,
                                              const Grid& grid, const Quadrature& q) {
  const std::vector<double> wt = weighted_transmission(slit, q);
  std::vector<double> phi(grid.n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.n); ++i) {
    const auto k = static_cast<std::size_t>(i);
    phi[k] = point(state, q, wt, grid.x(k));
  }
  return phi;
}

}  // namespace qfoundry::popper
