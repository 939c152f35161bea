#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phasespace/distributions.hpp"
#include "phasespace/hamiltonian.hpp"

namespace phasespace {

enum class Engine { oracle, spectral_moyal, kernel_quadrature };
enum class Integrator { rk4, split_step };

std::string_view to_string(Engine engine);
std::string_view to_string(Integrator integrator);
Engine engine_from_string(std::string_view name);
Integrator integrator_from_string(std::string_view name);

struct PropagatorConfig {
  Engine engine = Engine::spectral_moyal;
  double dt = 1e-3;
  int steps = 1000;
  Integrator integrator = Integrator::rk4;
  int stride = 100;

  double total_time() const noexcept { return dt * steps; }

  /// Throws std::invalid_argument on dt <= 0, steps <= 0, or a stride
  /// that does not divide steps.
  void validate() const;
};

/// Raised when the state stops being finite; carries the offending step.
class PropagationError : public std::runtime_error {
 public:
  PropagationError(int step, const std::string& message) : std::runtime_error(message), step_(step) {}
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Symbol of -i[H, rho], the exact lattice image of -2 sin(Lambda) (H f).
WeylSymbol moyal_rhs(const OperatorMatrix& h, const WeylSymbol& f);
WeylSymbol moyal_rhs(const HamiltonianSpec& h, const WeylSymbol& f, double t = 0.0);

/// Truncated gradient expansion of the Moyal bracket: odd orders 1 (Poisson
/// bracket), 3 or 5 in the bidirectional derivative, using spectral
/// derivatives on the periodic grid with physical momentum k = 2 pi p / N.
/// Approximate by construction; provided for comparison with moyal_rhs.
/// This is the continuum Moyal series. On the odd-N lattice a half-cell shift
/// is realised as a shift by (N + 1) / 2, so for plane waves with harmonics
/// (n, m) in (q, p) the exact bracket differs from the continuum one by
/// (-1)^(n_h m_f - m_h n_f). Symbols of localized states only carry even
/// p-harmonics in their main lobe, where the two agree.
WeylSymbol gradient_expansion_rhs(const WeylSymbol& h, const WeylSymbol& f, int order);

/// Dense integral kernel of the Moyal bracket, indexed (p N + q, p' N + q'):
///   K(p,q; p',q') = (-i / N^2) sum_{u,v} omega^{(p - p') v + (q - q') u}
///                   [ H(p + u/2, q - v/2) - H(p - u/2, q + v/2) ]
/// with halves taken modulo N. Applying it to any symbol reproduces
/// moyal_rhs. Real for a real Hamiltonian symbol.
class MoyalKernel {
 public:
  MoyalKernel(SpacePtr space, RealMatrix dense);

  const SpacePtr& space() const noexcept { return space_; }
  const RealMatrix& dense() const noexcept { return dense_; }

  double operator()(int p, int q, int pp, int qp) const;

  WeylSymbol apply(const WeylSymbol& f) const;

 private:
  SpacePtr space_;
  RealMatrix dense_;
};

MoyalKernel build_kernel(const WeylSymbol& h);
MoyalKernel build_kernel(const HamiltonianSpec& h, double t = 0.0);

/// The same kernel kept in factorised form: only the 2-D transform
///   Hhat(a, b) = sum_{p,q} H(p, q) omega^{2 (p b - q a)}
/// is stored (N^2 numbers) and the twisted convolution
///   K(p,q; p',q') = (-i/N^2) [ omega^{2(p q' - p' q)} Hhat(p - p', q - q')
///                             - omega^{-2(p q' - p' q)} Hhat(p' - p, q' - q) ]
/// is applied with length-N transforms in O(N^3).
class FactorizedMoyalKernel {
 public:
  explicit FactorizedMoyalKernel(const WeylSymbol& h);

  WeylSymbol apply(const WeylSymbol& f) const;

  /// Dense entry, for cross-checks.
  Complex operator()(int p, int q, int pp, int qp) const;

 private:
  SpacePtr space_;
  ComplexMatrix hhat_;         // Hhat(a, b)
  ComplexMatrix column_fft_;   // forward DFT over a of Hhat(., b), column b
  ComplexMatrix reversed_fft_; // same for Hhat(-a, -b)
};

struct Snapshot {
  int step = 0;
  double time = 0.0;
  QuasiDistribution distribution;
  double trace = 0.0;     // (1/N) sum f
  double purity = 0.0;    // (1/N) sum f^2
  double energy = 0.0;    // (1/N) sum H f
  double max_imag = 0.0;  // largest |Im f| before the imaginary part is dropped
};

struct Trajectory {
  PropagatorConfig config;
  int dimension = 0;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
};

/// Evolves a density operator under H and records Wigner snapshots every
/// `stride` steps (including step 0).
Trajectory evolve(const OperatorMatrix& initial_state, const HamiltonianSpec& h, const PropagatorConfig& config);

/// Same propagation for any Hermitian operator (trace need not be one),
/// returning the raw symbols at each snapshot.
std::vector<WeylSymbol> evolve_symbols(const OperatorMatrix& initial, const HamiltonianSpec& h,
                                       const PropagatorConfig& config, std::vector<std::string>* warnings = nullptr);

/// Exact e^{-iHt} rho e^{iHt} by eigendecomposition of a time-independent H.
OperatorMatrix exact_evolution(const OperatorMatrix& rho, const OperatorMatrix& h, double t);

}  // namespace phasespace
