#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qfoundry/errors.hpp"
#include "qfoundry/inequalities.hpp"

namespace qfoundry::ineq {
namespace {

struct GridPoint {
  double s;
  std::size_t index;  // i0, i1, j0, j1 packed base n
};

bool better(const GridPoint& x, const GridPoint& y) { return x.s > y.s || (x.s == y.s && x.index < y.index); }

void keep_best(std::vector<GridPoint>& best, const GridPoint& p, std::size_t k) {
  if (best.size() == k && !better(p, best.back())) return;
  best.insert(std::upper_bound(best.begin(), best.end(), p, better), p);
  if (best.size() > k) best.pop_back();
}

Vec3 spherical(double theta, double phi) {
  return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

// x = (theta, phi) for a0, a1, b0, b1.
double chsh_from_angles(const Eigen::Matrix3d& t, const double* x) {
  const Vec3 a0 = spherical(x[0], x[1]);
  const Vec3 a1 = spherical(x[2], x[3]);
  const Vec3 b0 = spherical(x[4], x[5]);
  const Vec3 b1 = spherical(x[6], x[7]);
  const Vec3 ta0 = t.transpose() * a0;
  const Vec3 ta1 = t.transpose() * a1;
  return ta0.dot(b0) + ta0.dot(b1) + ta1.dot(b0) - ta1.dot(b1);
}

double negated_chsh(const gsl_vector* x, void* params) {
  const auto* t = static_cast<const Eigen::Matrix3d*>(params);
  double angles[8];
  for (std::size_t i = 0; i < 8; ++i) angles[i] = gsl_vector_get(x, i);
  return -chsh_from_angles(*t, angles);
}

struct Refined {
  double s;
  std::array<double, 8> x;
};

Refined refine(const Eigen::Matrix3d& t, const std::array<double, 8>& start, const ChshOptions& options) {
  gsl_multimin_function fn{&negated_chsh, 8, const_cast<Eigen::Matrix3d*>(&t)};
  gsl_vector* x = gsl_vector_alloc(8);
  gsl_vector* step = gsl_vector_alloc(8);
  for (std::size_t i = 0; i < 8; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(step, 0.1);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 8);
  gsl_multimin_fminimizer_set(m, &fn, x, step);
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), options.size_tolerance) == GSL_SUCCESS) break;
  }
  Refined r;
  r.s = -gsl_multimin_fminimizer_minimum(m);
  for (std::size_t i = 0; i < 8; ++i) r.x[i] = gsl_vector_get(gsl_multimin_fminimizer_x(m), i);
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return r;
}

}  // namespace

ChshResult chsh_optimize(const StateVector& state, const ChshOptions& options) {
  if (!(options.grid_step > 0.0) || options.starts == 0) throw ValidationError("invalid CHSH optimizer options");
  const Eigen::Matrix3d t = correlation_tensor(state);

  const auto n = static_cast<std::size_t>(std::llround(2.0 * std::numbers::pi / options.grid_step));
  if (n < 2) throw ValidationError("CHSH grid step too coarse");
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n);

  // In-plane directions (sin t, 0, cos t), so theta = t and phi = 0 at every grid point.
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = spherical(step * static_cast<double>(i), 0.0);
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a.dot(t * spherical(step * static_cast<double>(j), 0.0));
  }

  const bool parallel = options.exec == Exec::Parallel;
  std::vector<std::vector<GridPoint>> per_row(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t i0s = 0; i0s < static_cast<std::int64_t>(n); ++i0s) {
    const auto i0 = static_cast<std::size_t>(i0s);
    std::vector<GridPoint>& best = per_row[i0];
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      for (std::size_t j0 = 0; j0 < n; ++j0) {
        const double base = m[i0 * n + j0] + m[i1 * n + j0];
        for (std::size_t j1 = 0; j1 < n; ++j1) {
          const double s = base + m[i0 * n + j1] - m[i1 * n + j1];
          keep_best(best, GridPoint{s, ((i0 * n + i1) * n + j0) * n + j1}, options.starts);
        }
      }
    }
  }
  std::vector<GridPoint> best;
  for (const auto& row : per_row) {
    for (const auto& p : row) keep_best(best, p, options.starts);
  }

  std::vector<Refined> refined(best.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::int64_t ks = 0; ks < static_cast<std::int64_t>(best.size()); ++ks) {
    const auto k = static_cast<std::size_t>(ks);
    std::size_t idx = best[k].index;
    std::array<double, 8> start{};
    for (int slot = 3; slot >= 0; --slot) {
      start[static_cast<std::size_t>(2 * slot)] = step * static_cast<double>(idx % n);
      idx /= n;
    }
    refined[k] = refine(t, start, options);
  }

  std::size_t winner = 0;
  for (std::size_t k = 1; k < refined.size(); ++k) {
    if (refined[k].s > refined[winner].s) winner = k;
  }
  const auto& x = refined[winner].x;
  auto setting = [&x](std::size_t slot) {
    return MeasurementSetting::normalized(spherical(x[2 * slot], x[2 * slot + 1]));
  };
  return ChshResult{
      refined[winner].s,
      ChshSettings{{setting(0), setting(1)}, {setting(2), setting(3)}},
      n * n * n * n,
      refined.size(),
  };
}

}  // namespace qfoundry::ineq
