#pragma once

// Dense complex linear algebra over small tensor-product Hilbert spaces.
//
// Index convention: subsystem 0 is the slowest-varying tensor index, so for
// dims (d0, d1, ..., dn) the basis state |i0 i1 ... in> sits at
//   i0 * (d1*...*dn) + i1 * (d2*...*dn) + ... + in.
// Global phases are never normalized away; compare states with fidelity().

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qfoundry::qcore {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using Dims = std::vector<std::size_t>;

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kEigenTol = 1e-10;

std::size_t dims_product(const Dims& dims);

class StateVector {
 public:
  /// Takes amplitudes as given; throws ValidationError unless the norm is 1 within kAlgebraTol.
  StateVector(Dims dims, CVector amplitudes);

  /// Rescales to unit norm first. Throws on a zero vector.
  static StateVector normalized(Dims dims, CVector amplitudes);
  static StateVector basis(Dims dims, std::size_t index);

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  Dims dims_;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  /// Validates hermiticity and unit trace (kAlgebraTol) and positivity (eigenvalues >= -kEigenTol).
  DensityMatrix(Dims dims, CMatrix matrix);

  static DensityMatrix from_state(const StateVector& state);

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  Dims dims_;
  CMatrix matrix_;
};

class Observable {
 public:
  /// Throws ValidationError unless square and Hermitian within kAlgebraTol.
  Observable(CMatrix matrix, std::string label = {});

  const CMatrix& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  CMatrix matrix_;
  std::string label_;
};

/// A unit direction on the Bloch / Poincare sphere.
class MeasurementSetting {
 public:
  explicit MeasurementSetting(const Vec3& direction);

  /// Polar angle theta from +z, azimuth phi from +x.
  static MeasurementSetting from_angles(double theta, double phi);
  /// Rescales a nonzero vector to unit length.
  static MeasurementSetting normalized(const Vec3& v);

  const Vec3& direction() const { return direction_; }
  double dot(const MeasurementSetting& other) const { return direction_.dot(other.direction_); }

 private:
  Vec3 direction_;
};

StateVector tensor(const StateVector& first, const StateVector& second);

/// Reduced state of subsystem `keep`; every other subsystem is traced out.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t keep);

/// Born probability <psi|P|psi>. P must be an idempotent Hermitian projector (1e-10).
double measure_probability(const StateVector& state, const Observable& projector);

/// n . sigma for a unit direction n.
Observable spin_observable(const MeasurementSetting& setting);

double expectation(const StateVector& state, const Observable& observable);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix identity(std::size_t dim);

/// |ket><ket| for a normalized ket.
Observable projector(const CVector& ket, std::string label = {});

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// Applies `op` to one subsystem, identity elsewhere. Throws if `op` does not preserve the norm.
StateVector apply_local(const StateVector& state, const CMatrix& op, std::size_t subsystem);

/// Von Neumann entropy in bits.
double entropy_bits(const DensityMatrix& rho);

/// (|01> - |10>)/sqrt(2) on two qubits, with |0> = spin up along z.
StateVector singlet();

}  // namespace qfoundry::qcore
