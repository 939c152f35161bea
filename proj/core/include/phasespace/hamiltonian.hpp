#pragma once

#include <optional>
#include <variant>

#include "phasespace/weyl.hpp"

namespace phasespace {

/// Harper-type oscillator, harmonic near its centre:
///   H(p, q) = omega0 (N / 4 pi) [ (2 - 2 cos(2 pi (q - q_c) / N))
///                               + (2 - 2 cos(2 pi (p - p_c) / N)) ]
/// Small displacements rotate in the (q, p) lattice plane at angular
/// frequency omega0.
struct HarmonicPreset {
  double omega0 = 1.0;
  int center_p = 0;
  int center_q = 0;
};

/// Nearest-neighbour hopping on the ring: H = onsite - hopping (X + X^dagger),
/// symbol onsite - 2 hopping cos(2 pi p / N).
struct TightBindingPreset {
  double hopping = 1.0;
  double onsite = 0.0;
};

/// Periodically kicked rotor with smooth kicks:
///   H(t) = (N / 4 pi)(2 - 2 cos(2 pi p / N)) + kick cos(2 pi q / N) pulse(t),
/// where pulse is a train of unit-area raised-cosine pulses of width
/// `pulse_width` centred on multiples of `period`.
struct KickedRotorPreset {
  double kick = 1.0;
  double period = 1.0;
  double pulse_width = 0.1;
};

/// Potential and kinetic tables for Hamiltonians of the form V(Q) + T(P).
struct SeparableParts {
  Eigen::VectorXd potential;  // indexed by q
  Eigen::VectorXd kinetic;    // indexed by p
};

/// A Hermitian Hamiltonian given as a matrix, a real symbol, or a preset.
class HamiltonianSpec {
 public:
  using Preset = std::variant<HarmonicPreset, TightBindingPreset, KickedRotorPreset>;

  static HamiltonianSpec from_matrix(const OperatorMatrix& h);
  static HamiltonianSpec from_symbol(const WeylSymbol& h);
  static HamiltonianSpec preset(SpacePtr space, Preset p);

  const SpacePtr& space() const noexcept { return space_; }
  bool time_dependent() const noexcept;

  OperatorMatrix matrix_at(double t = 0.0) const;
  WeylSymbol symbol_at(double t = 0.0) const;

  /// Set when the Hamiltonian splits as V(Q) + T(P) (presets only).
  std::optional<SeparableParts> separable_at(double t = 0.0) const;

  /// Upper estimate of max |eigenvalue| over the time domain.
  double spectral_radius() const;

 private:
  HamiltonianSpec(SpacePtr space, std::optional<OperatorMatrix> matrix, std::optional<Preset> preset);

  SpacePtr space_;
  std::optional<OperatorMatrix> matrix_;  // time-independent forms are cached here
  std::optional<Preset> preset_;
  double radius_ = 0.0;
};

/// Unit-area raised-cosine pulse train used by the kicked rotor.
double kick_pulse(const KickedRotorPreset& k, double t);

}  // namespace phasespace
