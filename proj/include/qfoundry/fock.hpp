#pragma once

// Two-mode bosonic Fock space truncated at total photon number n_max.
// Amplitudes are stored for every (na, nb) with na + nb <= n_max.

#include <string>
#include <utility>
#include <vector>

#include "qfoundry/qcore.hpp"

namespace qfoundry::fock {

using qcore::Complex;

inline constexpr int kDefaultNMax = 6;

enum class Mode { A, B };

/// Names of the two mode slots, e.g. {"H", "V"} or {"A", "D"}.
struct ModeLabels {
  std::string a = "a";
  std::string b = "b";
  friend bool operator==(const ModeLabels&, const ModeLabels&) = default;
};

class FockState {
 public:
  /// Vacuum.
  explicit FockState(int n_max = kDefaultNMax, ModeLabels labels = {});

  static FockState number(int na, int nb, int n_max = kDefaultNMax, ModeLabels labels = {});

  int n_max() const { return n_max_; }
  const ModeLabels& labels() const { return labels_; }

  /// Throws ValidationError when (na, nb) is outside the truncation.
  Complex amplitude(int na, int nb) const;
  void set_amplitude(int na, int nb, Complex value);

  double norm() const;
  /// Throws ValidationError on the zero vector.
  FockState normalized() const;
  bool is_normalized(double tol = qcore::kAlgebraTol) const;

  /// Nonzero (|amp| > tol) entries as ((na, nb), amp), ordered by total photon number then na descending.
  std::vector<std::pair<std::pair<int, int>, Complex>> terms(double tol = 0.0) const;

  FockState relabeled(ModeLabels labels) const;

 private:
  std::size_t index(int na, int nb) const;

  int n_max_;
  ModeLabels labels_;
  std::vector<Complex> amps_;
};

/// Raw ladder action a^dagger|n> = sqrt(n+1)|n+1>; no renormalization.
/// Throws TruncationOverflow when an occupied state would leave the truncation.
FockState create(const FockState& state, Mode mode);
FockState annihilate(const FockState& state, Mode mode);

enum class RotationConvention { BeamSplitter5050, PbsAtAngle };

/// Linear map of creation operators, a_in^dagger -> sum_out M(in, out) a_out^dagger.
///   PbsAtAngle(t):       H -> cos t A + sin t D,  V -> sin t A - cos t D (its own inverse)
///   BeamSplitter5050(t): a -> cos t a + sin t b,  b -> -sin t a + cos t b (50:50 at t = 45 deg)
struct ModeRotation {
  RotationConvention convention;
  double angle;

  static ModeRotation pbs(double angle);
  static ModeRotation beam_splitter(double angle);

  Eigen::Matrix2d matrix() const;
  ModeRotation inverse() const;
};

/// Rewrites every creation operator in the rotated modes and re-expands. Total photon number is
/// conserved, so the result always fits the input truncation. `out_labels` names the new slots;
/// by default the input labels are kept.
FockState apply_rotation(const FockState& state, const ModeRotation& rotation);
FockState apply_rotation(const FockState& state, const ModeRotation& rotation, ModeLabels out_labels);

/// |amplitude(1, 1)|^2 of a normalized state.
double coincidence_probability(const FockState& state);

/// (|N,0> + |0,N>)/sqrt(2).
FockState noon(int n, int n_max = kDefaultNMax, ModeLabels labels = {});

/// Maps a single photon over two paths onto two atoms: amp(1,0) -> |e g>, amp(0,1) -> |g e>,
/// with g = 0 and e = 1. Throws ValidationError for anything but a normalized one-photon state.
qcore::StateVector photon_atoms_entangle(const FockState& single_photon);

/// Two-photon Fock state as a symmetric two-particle state over one-photon kets
/// (0 = mode a, 1 = mode b). Throws unless every term has exactly two photons.
qcore::StateVector first_quantized(const FockState& two_photons);

/// Rewrites each particle's one-photon ket in the rotated basis. Applied to an unsymmetrized
/// product ket this is only a change of labels, not the operator action of the device.
qcore::StateVector relabel_first_quantized(const qcore::StateVector& two_particles, const ModeRotation& rotation);

}  // namespace qfoundry::fock
