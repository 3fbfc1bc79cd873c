#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qfoundry/errors.hpp"
#include "qfoundry/hvmodels.hpp"
#include "qfoundry/qcore.hpp"

using namespace qfoundry;
using namespace qfoundry::qcore;

namespace {

CVector vec(std::initializer_list<Complex> xs) {
  CVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CMatrix m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<CMatrix> qr(m);
  return qr.householderQ();
}

}  // namespace

TEST(Tensor, BasisOuterProduct) {
  const StateVector s = tensor(StateVector::basis({2}, 0), StateVector::basis({2}, 1));
  EXPECT_EQ(s.dims(), (Dims{2, 2}));
  EXPECT_EQ(s.amplitudes(), vec({0.0, 1.0, 0.0, 0.0}));
}

TEST(Tensor, Linearity) {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector plus({2}, vec({h, h}));
  const StateVector s = tensor(plus, StateVector::basis({2}, 0));
  EXPECT_NEAR(std::abs(s[0] - h), 0.0, 1e-15);
  EXPECT_EQ(s[1], Complex(0.0));
  EXPECT_NEAR(std::abs(s[2] - h), 0.0, 1e-15);
  EXPECT_EQ(s[3], Complex(0.0));
}

TEST(Tensor, SingletIsNormalized) { EXPECT_NEAR(singlet().amplitudes().norm(), 1.0, 1e-12); }

TEST(StateVectorValidation, RejectsBadInput) {
  EXPECT_THROW(StateVector({2}, vec({1.0, 1.0})), ValidationError);
  EXPECT_THROW(StateVector({2, 2}, vec({1.0, 0.0})), ValidationError);
  EXPECT_THROW(StateVector::normalized({2}, vec({0.0, 0.0})), ValidationError);
}

TEST(IndexConvention, SubsystemZeroIsSlowest) {
  // |i0 i1 i2> on dims (2, 3, 2) sits at i0*6 + i1*2 + i2.
  for (std::size_t i0 = 0; i0 < 2; ++i0) {
    for (std::size_t i1 = 0; i1 < 3; ++i1) {
      for (std::size_t i2 = 0; i2 < 2; ++i2) {
        const StateVector s =
            tensor(tensor(StateVector::basis({2}, i0), StateVector::basis({3}, i1)), StateVector::basis({2}, i2));
        EXPECT_EQ(s[i0 * 6 + i1 * 2 + i2], Complex(1.0));
        // Round trip: the reduction on each factor recovers its basis projector.
        const DensityMatrix rho = DensityMatrix::from_state(s);
        EXPECT_EQ(partial_trace(rho, 1).matrix()(static_cast<Eigen::Index>(i1), static_cast<Eigen::Index>(i1)),
                  Complex(1.0));
      }
    }
  }
}

TEST(PartialTrace, SingletIsMaximallyMixed) {
  const DensityMatrix rho = DensityMatrix::from_state(singlet());
  const CMatrix half = 0.5 * identity(2);
  EXPECT_LT(max_abs(partial_trace(rho, 1).matrix() - half), 1e-12);
  EXPECT_LT(max_abs(partial_trace(rho, 0).matrix() - half), 1e-12);
}

TEST(PartialTrace, ProductFactorizes) {
  const StateVector s = tensor(StateVector::basis({2}, 0), StateVector::basis({2}, 1));
  const CMatrix ra = partial_trace(DensityMatrix::from_state(s), 0).matrix();
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  EXPECT_LT(max_abs(ra - expected), 1e-12);
}

TEST(PartialTrace, SingletInPlusMinusBasis) {
  // Same singlet written over |+>, |->: (|+-> - |-+>)/sqrt(2) up to sign.
  const double h = 1.0 / std::sqrt(2.0);
  CMatrix to_pm(2, 2);
  to_pm << h, h, h, -h;
  const StateVector rotated = apply_local(apply_local(singlet(), to_pm, 0), to_pm, 1);
  const CMatrix rb = partial_trace(DensityMatrix::from_state(rotated), 1).matrix();
  const CMatrix rb_z = partial_trace(DensityMatrix::from_state(singlet()), 1).matrix();
  EXPECT_LT(max_abs(rb - 0.5 * identity(2)), 1e-12);
  EXPECT_LT(max_abs(rb - rb_z), 1e-12);
}

TEST(PartialTrace, OutOfRange) {
  EXPECT_THROW(partial_trace(DensityMatrix::from_state(singlet()), 2), ValidationError);
}

TEST(PartialTrace, ThreeLevelSubsystem) {
  // (|0>|a> + |2>|b>)/sqrt(2) on dims (3, 2): keep 0 gives diag(1/2, 0, 1/2).
  CVector amps = CVector::Zero(6);
  amps(0) = 1.0 / std::sqrt(2.0);
  amps(5) = 1.0 / std::sqrt(2.0);
  const CMatrix r = partial_trace(DensityMatrix::from_state(StateVector({3, 2}, amps)), 0).matrix();
  EXPECT_NEAR(r(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(r(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(r(2, 2).real(), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(r(0, 2)), 0.0, 1e-15);
}

TEST(MeasureProbability, Eigenstate) {
  const StateVector up = StateVector::basis({2}, 0);
  EXPECT_NEAR(measure_probability(up, projector(up.amplitudes())), 1.0, 1e-12);
}

TEST(MeasureProbability, SingletAntiCorrelated) {
  EXPECT_NEAR(measure_probability(singlet(), projector(StateVector::basis({2, 2}, 0).amplitudes())), 0.0, 1e-15);
}

TEST(MeasureProbability, PolarizationBothPass) {
  const double h = 1.0 / std::sqrt(2.0);
  const StateVector phi_plus({2, 2}, vec({h, 0.0, 0.0, h}));
  for (double theta = 0.0; theta < std::numbers::pi; theta += 0.1) {
    const double c = std::cos(theta), s = std::sin(theta);
    // Oracle: <(1,0) x (c,s) | phi+> = h*c, written out by hand.
    const double amp = h * 1.0 * c + h * 0.0 * s;
    const CVector ket = qcore::kron(vec({1.0, 0.0}), vec({c, s}));
    EXPECT_NEAR(measure_probability(phi_plus, projector(ket)), amp * amp, 1e-12);
    EXPECT_NEAR(measure_probability(phi_plus, projector(ket)), 0.5 * c * c, 1e-12);
  }
}

TEST(MeasureProbability, RejectsNonIdempotent) {
  CMatrix m = CMatrix::Identity(2, 2) * 0.5;
  EXPECT_THROW(measure_probability(StateVector::basis({2}, 0), Observable(m)), ValidationError);
}

TEST(MeasureProbability, CompleteSetSumsToOne) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  CVector a(4);
  for (int i = 0; i < 4; ++i) a(i) = Complex(n(rng), n(rng));
  const StateVector s = StateVector::normalized({2, 2}, a);
  const CMatrix u = kron(random_unitary(rng), random_unitary(rng));
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += measure_probability(s, projector(u.col(k)));
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(SpinObservable, PauliMatrices) {
  const CMatrix z = spin_observable(MeasurementSetting(Vec3(0, 0, 1))).matrix();
  EXPECT_EQ(z(0, 0), Complex(1.0));
  EXPECT_EQ(z(1, 1), Complex(-1.0));
  EXPECT_EQ(z(0, 1), Complex(0.0));
  const CMatrix x = spin_observable(MeasurementSetting(Vec3(1, 0, 0))).matrix();
  EXPECT_EQ(x(0, 1), Complex(1.0));
  EXPECT_EQ(x(1, 0), Complex(1.0));
  EXPECT_EQ(x(0, 0), Complex(0.0));
}

TEST(SpinObservable, SingletCorrelationMatchesMatrixElement) {
  const auto grid = hv::fibonacci_sphere(23);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 n = grid[i].direction();
    const Vec3 m = grid[(i * 7 + 3) % grid.size()].direction();
    // Oracle: singlet amplitudes (0, h, -h, 0), so <n.s x m.s> = (1/2)(A_01,01 - A_01,10 - A_10,01 + A_10,10)
    // with A = N (x) M written entrywise.
    const Complex nz(n.z()), nxm(n.x(), -n.y()), nxp(n.x(), n.y());
    const Complex mz(m.z()), mxm(m.x(), -m.y()), mxp(m.x(), m.y());
    const Complex N[2][2] = {{nz, nxm}, {nxp, -nz}};
    const Complex M[2][2] = {{mz, mxm}, {mxp, -mz}};
    auto el = [&](int i1, int j1, int i2, int j2) { return N[i1][i2] * M[j1][j2]; };
    const Complex oracle = 0.5 * (el(0, 1, 0, 1) - el(0, 1, 1, 0) - el(1, 0, 0, 1) + el(1, 0, 1, 0));
    const double qc = expectation(
        singlet(), Observable(kron(spin_observable(grid[i]).matrix(),
                                   spin_observable(grid[(i * 7 + 3) % grid.size()]).matrix())));
    EXPECT_NEAR(qc, oracle.real(), 1e-12);
    EXPECT_NEAR(qc, -n.dot(m), 1e-12);
  }
}

TEST(Invariants, SingletRotationalInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix u = random_unitary(rng);
    EXPECT_NEAR(fidelity(apply_local(apply_local(singlet(), u, 0), u, 1), singlet()), 1.0, 1e-12);
  }
}

TEST(Invariants, PartialTraceIgnoresLocalUnitaryOnTracedPart) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    CVector a(4);
    for (int i = 0; i < 4; ++i) a(i) = Complex(n(rng), n(rng));
    const StateVector s = StateVector::normalized({2, 2}, a);
    const StateVector t = apply_local(s, random_unitary(rng), 1);
    EXPECT_LT(max_abs(partial_trace(DensityMatrix::from_state(s), 0).matrix() -
                      partial_trace(DensityMatrix::from_state(t), 0).matrix()),
              1e-12);
  }
}

TEST(Invariants, TensorThenTraceReturnsFactor) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n;
  CVector a(3), b(2);
  for (int i = 0; i < 3; ++i) a(i) = Complex(n(rng), n(rng));
  for (int i = 0; i < 2; ++i) b(i) = Complex(n(rng), n(rng));
  const StateVector sa = StateVector::normalized({3}, a);
  const StateVector sb = StateVector::normalized({2}, b);
  const DensityMatrix rho = DensityMatrix::from_state(tensor(sa, sb));
  EXPECT_LT(max_abs(partial_trace(rho, 0).matrix() - DensityMatrix::from_state(sa).matrix()), 1e-12);
  EXPECT_LT(max_abs(partial_trace(rho, 1).matrix() - DensityMatrix::from_state(sb).matrix()), 1e-12);
}

TEST(DensityMatrixValidation, RejectsNonPhysical) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.5;
  m(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix({2}, m), ValidationError);
  m = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix({2}, m), ValidationError);
  m = 0.5 * CMatrix::Identity(2, 2);
  m(0, 1) = 0.3;
  EXPECT_THROW(DensityMatrix({2}, m), ValidationError);
}

TEST(MeasurementSettingValidation, UnitNorm) {
  EXPECT_THROW(MeasurementSetting(Vec3(1, 1, 0)), ValidationError);
  EXPECT_NO_THROW(MeasurementSetting::from_angles(0.3, 1.2));
}

TEST(ApplyLocal, RejectsNonUnitary) {
  CMatrix m = 2.0 * identity(2);
  EXPECT_THROW(apply_local(singlet(), m, 0), ValidationError);
}

TEST(Entropy, SingletReductionIsOneBit) {
  EXPECT_NEAR(entropy_bits(partial_trace(DensityMatrix::from_state(singlet()), 0)), 1.0, 1e-12);
  EXPECT_NEAR(entropy_bits(DensityMatrix::from_state(StateVector::basis({2}, 0))), 0.0, 1e-12);
}
