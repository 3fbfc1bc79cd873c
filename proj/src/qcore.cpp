#include "qfoundry/qcore.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "qfoundry/errors.hpp"

namespace qfoundry::qcore {
namespace {

void check_dims(const Dims& dims, std::size_t length) {
  for (std::size_t d : dims) {
    if (d < 2) throw ValidationError("subsystem dimension must be >= 2");
  }
  if (dims_product(dims) != length) {
    std::ostringstream msg;
    msg << "amplitude count " << length << " does not match the product of dims " << dims_product(dims);
    throw ValidationError(msg.str());
  }
}

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

std::size_t dims_product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

StateVector::StateVector(Dims dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  check_dims(dims_, size());
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > kAlgebraTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state is not normalized: |psi|^2 = " << norm2;
    throw ValidationError(msg.str());
  }
}

StateVector StateVector::normalized(Dims dims, CVector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw ValidationError("cannot normalize a zero vector");
  amplitudes /= norm;
  return StateVector(std::move(dims), std::move(amplitudes));
}

StateVector StateVector::basis(Dims dims, std::size_t index) {
  const std::size_t n = dims_product(dims);
  if (index >= n) throw ValidationError("basis index out of range");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(n));
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(dims), std::move(amps));
}

DensityMatrix::DensityMatrix(Dims dims, CMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("density matrix must be square");
  check_dims(dims_, static_cast<std::size_t>(matrix_.rows()));
  if (!is_hermitian(matrix_, kAlgebraTol)) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > kAlgebraTol) throw ValidationError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigenTol) throw ValidationError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::from_state(const StateVector& state) {
  const CVector& psi = state.amplitudes();
  return DensityMatrix(state.dims(), psi * psi.adjoint());
}

Observable::Observable(CMatrix matrix, std::string label) : matrix_(std::move(matrix)), label_(std::move(label)) {
  if (!is_hermitian(matrix_, kAlgebraTol)) throw ValidationError("observable '" + label_ + "' is not Hermitian");
}

MeasurementSetting::MeasurementSetting(const Vec3& direction) : direction_(direction) {
  if (std::abs(direction_.norm() - 1.0) > kAlgebraTol) throw ValidationError("measurement setting is not a unit vector");
}

MeasurementSetting MeasurementSetting::from_angles(double theta, double phi) {
  return MeasurementSetting::normalized(
      Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)));
}

MeasurementSetting MeasurementSetting::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw ValidationError("measurement setting direction is zero");
  return MeasurementSetting(v / n);
}

StateVector tensor(const StateVector& first, const StateVector& second) {
  Dims dims = first.dims();
  dims.insert(dims.end(), second.dims().begin(), second.dims().end());
  const auto n2 = static_cast<Eigen::Index>(second.size());
  CVector amps(static_cast<Eigen::Index>(first.size()) * n2);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(first.size()); ++i) {
    amps.segment(i * n2, n2) = first.amplitudes()(i) * second.amplitudes();
  }
  return StateVector(std::move(dims), std::move(amps));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep) {
  const Dims& dims = rho.dims();
  if (keep >= dims.size()) {
    std::ostringstream msg;
    msg << "partial_trace: subsystem " << keep << " out of range for " << dims.size() << " subsystems";
    throw ValidationError(msg.str());
  }
  const std::size_t d = dims[keep];
  const std::size_t left = dims_product(Dims(dims.begin(), dims.begin() + static_cast<std::ptrdiff_t>(keep)));
  const std::size_t right = dims_product(Dims(dims.begin() + static_cast<std::ptrdiff_t>(keep) + 1, dims.end()));
  const CMatrix& m = rho.matrix();

  CMatrix reduced = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      Complex sum = 0.0;
      for (std::size_t l = 0; l < left; ++l) {
        for (std::size_t r = 0; r < right; ++r) {
          const auto row = static_cast<Eigen::Index>((l * d + i) * right + r);
          const auto col = static_cast<Eigen::Index>((l * d + j) * right + r);
          sum += m(row, col);
        }
      }
      reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return DensityMatrix(Dims{d}, std::move(reduced));
}

double measure_probability(const StateVector& state, const Observable& projector) {
  const CMatrix& p = projector.matrix();
  if (static_cast<std::size_t>(p.rows()) != state.size()) throw ValidationError("projector dimension mismatch");
  if ((p * p - p).cwiseAbs().maxCoeff() > kEigenTol) {
    throw ValidationError("observable '" + projector.label() + "' is not idempotent");
  }
  // ||P psi||^2 rather than <psi|P psi>, so round-off cannot produce a negative probability.
  return (p * state.amplitudes()).squaredNorm();
}

Observable spin_observable(const MeasurementSetting& setting) {
  const Vec3& n = setting.direction();
  CMatrix m(2, 2);
  m << Complex(n.z(), 0.0), Complex(n.x(), -n.y()),
       Complex(n.x(), n.y()), Complex(-n.z(), 0.0);
  return Observable(std::move(m), "n.sigma");
}

double expectation(const StateVector& state, const Observable& observable) {
  if (observable.dim() != state.size()) throw ValidationError("observable dimension mismatch");
  const CVector& psi = state.amplitudes();
  return psi.dot(observable.matrix() * psi).real();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Observable projector(const CVector& ket, std::string label) {
  if (std::abs(ket.squaredNorm() - 1.0) > kAlgebraTol) throw ValidationError("projector ket is not normalized");
  return Observable(ket * ket.adjoint(), std::move(label));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dims() != b.dims()) throw ValidationError("fidelity: dims differ");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

StateVector apply_local(const StateVector& state, const CMatrix& op, std::size_t subsystem) {
  const Dims& dims = state.dims();
  if (subsystem >= dims.size()) throw ValidationError("apply_local: subsystem out of range");
  const std::size_t d = dims[subsystem];
  if (static_cast<std::size_t>(op.rows()) != d || op.cols() != op.rows()) {
    throw ValidationError("apply_local: operator dimension mismatch");
  }
  const auto sub = static_cast<std::ptrdiff_t>(subsystem);
  const std::size_t left = dims_product(Dims(dims.begin(), dims.begin() + sub));
  const std::size_t right = dims_product(Dims(dims.begin() + sub + 1, dims.end()));
  const CVector& in = state.amplitudes();
  CVector out = CVector::Zero(in.size());
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      for (std::size_t i = 0; i < d; ++i) {
        Complex sum = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          sum += op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                 in(static_cast<Eigen::Index>((l * d + j) * right + r));
        }
        out(static_cast<Eigen::Index>((l * d + i) * right + r)) = sum;
      }
    }
  }
  return StateVector(dims, std::move(out));
}

double entropy_bits(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    if (p > kEigenTol) s -= p * std::log2(p);
  }
  return s;
}

StateVector singlet() {
  const double h = 1.0 / std::sqrt(2.0);
  CVector amps(4);
  amps << 0.0, h, -h, 0.0;
  return StateVector({2, 2}, std::move(amps));
}

}  // namespace qfoundry::qcore
