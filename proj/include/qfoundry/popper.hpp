#pragma once

// Position-momentum entangled pair in one transverse dimension, hbar = 1:
//   psi(x1, x2) ~ exp(-(x1 + x2)^2 / (8 s+^2)) exp(-(x1 - x2)^2 / (8 s-^2)).
// A slit on particle 1 multiplies by its aperture profile and integrates x1 out.

#include <cstddef>
#include <vector>

#include "qfoundry/exec.hpp"

namespace qfoundry::popper {

struct GaussianPairState {
  double sigma_plus;
  double sigma_minus;

  /// Throws ValidationError unless both spreads are positive and finite.
  void validate() const;
  bool entangled() const { return sigma_plus != sigma_minus; }
  double amplitude(double x1, double x2) const;
};

enum class SlitProfile { Gaussian, Hard };

/// Gaussian: amplitude exp(-(x - center)^2 / (4 width^2)), so |t|^2 has standard deviation `width`.
/// Hard: transmits |x - center| <= width / 2.
struct SlitCondition {
  double center = 0.0;
  double width = 1.0;
  SlitProfile profile = SlitProfile::Gaussian;

  void validate() const;
  double transmission(double x) const;
};

/// Width of the Gaussian slit whose |t|^2 variance matches a hard slit of full width `hard_width`.
double matched_gaussian_width(double hard_width);

struct GridSpec {
  int points_per_scale = 32;   ///< grid points per smallest length scale
  double extent_factor = 8.0;  ///< half-extent in units of the largest spread
};

/// Uniform x2 grid: N a power of two, spacing h, points -L + i h.
struct Grid {
  std::size_t n;
  double half_extent;
  double spacing;
  double x(std::size_t i) const { return -half_extent + static_cast<double>(i) * spacing; }
};

Grid make_grid(const GaussianPairState& state, const SlitCondition* slit, const GridSpec& spec);

struct Uncertainties {
  double dx;
  double dp;
  double product;
  std::size_t points;
  double spacing;
  double norm_drift;  ///< |norm(all points) - norm(even points)| / norm(all points)
};

/// Spreads of particle 2 given that particle 1 passed the slit. Position moments are taken on
/// the grid, momentum moments from the discrete Fourier transform. Throws ResolutionError when
/// the norm drift exceeds 1e-6 or the state reaches the grid edge.
Uncertainties conditional_uncertainties(const GaussianPairState& state, const SlitCondition& slit,
                                        const GridSpec& grid = {}, Exec exec = Exec::Parallel);

/// Marginal spreads of particle 2 from the full two-particle amplitude.
Uncertainties unconditioned_uncertainties(const GaussianPairState& state, const GridSpec& grid = {});

// Kernels: conditional amplitude phi(x2_i) = sum_k w_k t(x1_k) psi(x1_k, x2_i). Both paths
// evaluate each point with the same operations in the same order.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Quadrature slit_quadrature(const GaussianPairState& state, const SlitCondition& slit, const Grid& grid,
                           const GridSpec& spec);

std::vector<double> conditional_amplitude_serial(const GaussianPairState& state, const SlitCondition& slit,
                                                 const Grid& grid, const Quadrature& q);
std::vector<double> conditional_amplitude_omp(const GaussianPairState& state, const SlitCondition& slit,
                                              const Grid& grid, const Quadrature& q);

}  // namespace qfoundry::popper
