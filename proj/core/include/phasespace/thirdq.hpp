#pragma once

#include <vector>

#include "phasespace/distributions.hpp"

namespace phasespace {

enum class Statistics { boson, fermion };

/// Field amplitudes over the mode labels q. Operators are never
/// materialised; the decomposition carries c-number coefficients only.
class ModeDecomposition {
 public:
  ModeDecomposition(SpacePtr space, ComplexVector coefficients, Statistics statistics);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexVector& position_coefficients() const noexcept { return coefficients_; }
  Statistics statistics() const noexcept { return statistics_; }

  /// Coefficients over momentum labels: sum_q <p|q> psi(q) / sqrt(N).
  ComplexVector momentum_coefficients() const;

  static ModeDecomposition from_momentum(SpacePtr space, const ComplexVector& momentum, Statistics statistics);

 private:
  SpacePtr space_;
  ComplexVector coefficients_;
  Statistics statistics_;
};

/// Equal-time lesser function G[a][b] = <psi^dagger(b) psi(a)> over modes.
class CorrelationState {
 public:
  static constexpr double kTolerance = 1e-10;

  CorrelationState(SpacePtr space, ComplexMatrix g, Statistics statistics);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexMatrix& matrix() const noexcept { return g_; }
  Statistics statistics() const noexcept { return statistics_; }

  double particle_number() const { return g_.trace().real(); }
  Eigen::VectorXd occupations() const;

 private:
  SpacePtr space_;
  ComplexMatrix g_;
  Statistics statistics_;
};

/// f(p, q) = sum_v omega^{2 p v} G[q - v][q + v]: the average of the
/// Klimontovich operator, i.e. the Wigner function of the mode occupation.
QuasiDistribution klimontovich_average(const CorrelationState& corr);

/// G(t + dt) = exp(-i h dt) G exp(i h dt).
CorrelationState ballistic_step_corr(const CorrelationState& corr, const OperatorMatrix& h, double dt);

/// One-body coefficients V(r, r') in A = sum V(r, r') psi^dagger(r) psi(r').
/// Assembled from the Weyl symbol by summing over p with omega^{2 p v}.
class OneBodyTable {
 public:
  explicit OneBodyTable(ComplexMatrix v) : v_(std::move(v)) {}
  const ComplexMatrix& coefficients() const noexcept { return v_; }
  /// sum V(1,2) G[2][1] = Tr(A G).
  Complex expectation(const CorrelationState& corr) const;

 private:
  ComplexMatrix v_;
};

OneBodyTable assemble_one_body(const OperatorMatrix& a);

/// Dense four-index table indexed (1, 2, 3, 4) in the order of
/// psi^dagger(1) psi^dagger(2) psi(3) psi(4).
class FourIndexTable {
 public:
  explicit FourIndexTable(int modes);
  int modes() const noexcept { return m_; }
  Complex& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  Complex operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  /// max |V(1,2,3,4) - conj V(4,3,2,1)|.
  double hermiticity_defect() const;

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * m_ + j) * m_ + k) * m_ + l;
  }
  int m_;
  std::vector<Complex> data_;
};

/// Contact interaction U delta_{1=2=3=4}.
FourIndexTable contact_interaction(int modes, double strength);

class TwoBodyTable {
 public:
  explicit TwoBodyTable(FourIndexTable v) : v_(std::move(v)) {}
  const FourIndexTable& coefficients() const noexcept { return v_; }

  /// Wick (Gaussian-state) value of sum V psi^dagger(1) psi^dagger(2) psi(3) psi(4):
  ///   sum V (G[4][1] G[3][2] +/- G[3][1] G[4][2]),  + bosons, - fermions.
  Complex wick_expectation(const CorrelationState& corr) const;

 private:
  FourIndexTable v_;
};

/// Validates pair Hermiticity (to 1e-10) and returns V = <r r'|A|r'' r'''>.
TwoBodyTable assemble_two_body(const FourIndexTable& matrix_elements);

/// Energy-resolved distribution set: one symbol per energy point. Slices
/// hold f(p, E, q) = -i G^<(p, E, q), so they are real for physical input.
struct EnergyResolvedSymbols {
  std::vector<double> energies;
  std::vector<WeylSymbol> slices;
  /// Quadrature weight used when there is a single slice.
  double single_slice_weight = 1.0;
};

/// Inputs of the dissipative transport equation; each is either one symbol
/// shared by all energies or one symbol per energy.
struct TransportInputs {
  std::vector<WeylSymbol> hamiltonian;
  std::vector<WeylSymbol> injection;      // Sigma^<
  std::vector<WeylSymbol> broadening;     // Gamma >= 0
  std::vector<WeylSymbol> retarded_real;  // Re G^r
  std::vector<WeylSymbol> spectral;       // A >= 0

  /// Throws if Gamma or A is negative anywhere or slice counts are inconsistent.
  void validate(std::size_t energy_count) const;
};

/// df/dt = 2 sin(L)[H f + S ReG] + cos(L)[S A - Gamma f], where the sine
/// pairing is the symbol of -i[X, Y] and the cosine pairing the symbol of
/// (XY + YX) / 2. Classical RK4 step; energy slices advance independently.
EnergyResolvedSymbols transport_step(const EnergyResolvedSymbols& f, const TransportInputs& inputs, double dt);

/// Trapezoidal integral over E of the slices.
QuasiDistribution energy_integrate(const EnergyResolvedSymbols& f);

}  // namespace phasespace
