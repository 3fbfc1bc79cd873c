#include <gtest/gtest.h>

#include <cmath>

#include "qfoundry/errors.hpp"
#include "qfoundry/popper.hpp"

using namespace qfoundry;
using namespace qfoundry::popper;

namespace {

// Integrating x1 against the Gaussian slit leaves exp(-alpha x2^2 + ...), with
//   P = 1/(8 s+^2) + 1/(8 s-^2), D = 1/(8 s+^2) - 1/(8 s-^2), A = P + 1/(4 w^2),
//   alpha = P - D^2 / A, dx = 1 / (2 sqrt(alpha)), dp = sqrt(alpha).
struct Closed {
  double dx;
  double dp;
};

Closed gaussian_slit_oracle(double sp, double sm, double w) {
  const double p = 1.0 / (8 * sp * sp) + 1.0 / (8 * sm * sm);
  const double d = 1.0 / (8 * sp * sp) - 1.0 / (8 * sm * sm);
  const double a = p + 1.0 / (4 * w * w);
  const double alpha = p - d * d / a;
  return {1.0 / (2.0 * std::sqrt(alpha)), std::sqrt(alpha)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Popper, ValidatesInputs) {
  EXPECT_THROW(GaussianPairState({0.0, 1.0}).validate(), ValidationError);
  EXPECT_THROW(SlitCondition({0.0, -1.0, SlitProfile::Gaussian}).validate(), ValidationError);
  EXPECT_THROW(conditional_uncertainties({1, 1}, {0, 1, SlitProfile::Gaussian}, {0, 8}), ValidationError);
  EXPECT_FALSE(GaussianPairState({1, 1}).entangled());
  EXPECT_TRUE(GaussianPairState({2, 0.5}).entangled());
}

TEST(Popper, GaussianSlitMatchesClosedForm) {
  for (double sp : {0.5, 2.0})
    for (double sm : {0.3, 1.0})
      for (double w : {0.05, 0.7, 3.0}) {
        const auto u = conditional_uncertainties({sp, sm}, {0.0, w, SlitProfile::Gaussian});
        const Closed c = gaussian_slit_oracle(sp, sm, w);
        EXPECT_LT(rel(u.dx, c.dx), 1e-8) << sp << " " << sm << " " << w;
        EXPECT_LT(rel(u.dp, c.dp), 1e-8) << sp << " " << sm << " " << w;
        EXPECT_NEAR(u.product, 0.5, 1e-8);
      }
}

TEST(Popper, OffCenterSlitShiftsButKeepsSpreads) {
  const auto a = conditional_uncertainties({2.0, 0.4}, {0.0, 0.5, SlitProfile::Gaussian});
  const auto b = conditional_uncertainties({2.0, 0.4}, {1.5, 0.5, SlitProfile::Gaussian});
  EXPECT_LT(rel(b.dx, a.dx), 1e-8);
  EXPECT_LT(rel(b.dp, a.dp), 1e-8);
}

TEST(Popper, ProductStateIsUnaffected) {
  const GaussianPairState s{1.0, 1.0};
  const auto free = unconditioned_uncertainties(s);
  for (double w : {0.1, 1.0, 5.0}) {
    const auto u = conditional_uncertainties(s, {0.3, w, SlitProfile::Gaussian});
    EXPECT_LT(rel(u.dx, free.dx), 1e-8);
    EXPECT_LT(rel(u.dp, free.dp), 1e-8);
  }
  EXPECT_NEAR(free.product, 0.5, 1e-8);
}

TEST(Popper, NarrowingLocalizesWithoutChangingTheProduct) {
  const GaussianPairState s{2.0, 0.25};
  const auto wide = conditional_uncertainties(s, {0.0, 1.0, SlitProfile::Gaussian});
  const auto narrow = conditional_uncertainties(s, {0.0, 0.1, SlitProfile::Gaussian});
  EXPECT_LT(narrow.dx, wide.dx);
  EXPECT_NEAR(narrow.product, wide.product, 1e-3);
  EXPECT_NEAR(narrow.product, 0.5, 1e-3);
}

TEST(Popper, UnconditionedMatchesOracle) {
  // |psi|^2 gives Var(x1 + x2) = 2 s+^2 and Var(x1 - x2) = 2 s-^2, so
  // Var x2 = (s+^2 + s-^2)/2 and Var p2 = 1/(8 s+^2) + 1/(8 s-^2).
  const double sp = 2.0, sm = 0.5;
  const auto u = unconditioned_uncertainties({sp, sm});
  EXPECT_LT(rel(u.dx, std::sqrt((sp * sp + sm * sm) / 2.0)), 1e-8);
  EXPECT_LT(rel(u.dp, std::sqrt(1.0 / (8 * sp * sp) + 1.0 / (8 * sm * sm))), 1e-8);
  EXPECT_NEAR(u.product, (sp * sp + sm * sm) / (4 * sp * sm), 1e-8);
  EXPECT_GT(u.product, 0.5);
}

TEST(Popper, UnconditionedProductIsScaleFree) {
  const auto a = unconditioned_uncertainties({2.0, 0.5});
  const auto b = unconditioned_uncertainties({6.0, 1.5});
  EXPECT_NEAR(a.product, b.product, 1e-9);
}

TEST(Popper, HardSlitDiffractsMore) {
  for (double width : {0.5, 2.0}) {
    const GaussianPairState s{2.0, 0.4};
    const auto hard = conditional_uncertainties(s, {0.0, width, SlitProfile::Hard});
    const auto soft = conditional_uncertainties(s, {0.0, matched_gaussian_width(width), SlitProfile::Gaussian});
    EXPECT_GT(hard.dp, soft.dp);
    EXPECT_GE(hard.product, 0.5 - 1e-3);
  }
}

TEST(Popper, GridDoublingConverges) {
  const GaussianPairState s{3.0, 0.3};
  for (auto profile : {SlitProfile::Gaussian, SlitProfile::Hard}) {
    const SlitCondition slit{0.2, 0.6, profile};
    const auto base = conditional_uncertainties(s, slit, {32, 8});
    const auto fine = conditional_uncertainties(s, slit, {64, 8});
    EXPECT_LT(rel(fine.dx, base.dx), 1e-4);
    EXPECT_LT(rel(fine.dp, base.dp), 1e-4);
    EXPECT_LT(fine.spacing, base.spacing);
  }
}

TEST(Popper, SerialAndParallelIdentical) {
  const GaussianPairState s{1.7, 0.35};
  const SlitCondition slit{0.4, 0.8, SlitProfile::Hard};
  const GridSpec spec;
  const Grid grid = make_grid(s, &slit, spec);
  const Quadrature q = slit_quadrature(s, slit, grid, spec);
  EXPECT_EQ(conditional_amplitude_serial(s, slit, grid, q), conditional_amplitude_omp(s, slit, grid, q));
  const auto a = conditional_uncertainties(s, slit, spec, Exec::Serial);
  const auto b = conditional_uncertainties(s, slit, spec, Exec::Parallel);
  EXPECT_EQ(a.dx, b.dx);
  EXPECT_EQ(a.dp, b.dp);
}

TEST(Popper, CoarseGridIsReported) {
  EXPECT_THROW(conditional_uncertainties({1.0, 0.5}, {0.0, 0.5, SlitProfile::Gaussian}, {1, 8}), ResolutionError);
  EXPECT_THROW(conditional_uncertainties({1.0, 0.5}, {0.0, 0.5, SlitProfile::Gaussian}, {32, 1}), ResolutionError);
}
