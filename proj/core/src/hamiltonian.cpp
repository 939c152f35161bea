#include "phasespace/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phasespace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd cosine_well(const DualBasisSpace& s, int center, double scale) {
  const int n = s.dimension();
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) out(k) = scale * (2.0 - 2.0 * std::cos(kTwoPi * (k - center) / n));
  return out;
}

SeparableParts parts_of(const DualBasisSpace& s, const HamiltonianSpec::Preset& preset, double t) {
  const int n = s.dimension();
  return std::visit(
      [&](const auto& p) -> SeparableParts {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, HarmonicPreset>) {
          const double scale = p.omega0 * n / (4.0 * std::numbers::pi);
          return {cosine_well(s, s.wrap(p.center_q), scale), cosine_well(s, s.wrap(p.center_p), scale)};
        } else if constexpr (std::is_same_v<T, TightBindingPreset>) {
          Eigen::VectorXd kinetic(n);
          for (int k = 0; k < n; ++k) kinetic(k) = p.onsite - 2.0 * p.hopping * std::cos(kTwoPi * k / n);
          return {Eigen::VectorXd::Zero(n), kinetic};
        } else {
          const double amplitude = p.kick * kick_pulse(p, t);
          Eigen::VectorXd potential(n);
          for (int k = 0; k < n; ++k) potential(k) = amplitude * std::cos(kTwoPi * k / n);
          return {potential, cosine_well(s, 0, n / (4.0 * std::numbers::pi))};
        }
      },
      preset);
}

ComplexMatrix assemble(const DualBasisSpace& s, const SeparableParts& parts) {
  ComplexMatrix m = momentum_function(s, parts.kinetic);
  m.diagonal() += parts.potential.cast<Complex>();
  return (0.5 * (m + m.adjoint())).eval();
}

double max_abs_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double kick_pulse(const KickedRotorPreset& k, double t) {
  if (!(k.period > 0.0) || !(k.pulse_width > 0.0) || k.pulse_width > k.period) {
    throw std::invalid_argument("kicked rotor needs 0 < pulse_width <= period");
  }
  const double tau = t - std::round(t / k.period) * k.period;
  if (std::abs(tau) >= 0.5 * k.pulse_width) return 0.0;
  return (1.0 + std::cos(kTwoPi * tau / k.pulse_width)) / k.pulse_width;
}

HamiltonianSpec::HamiltonianSpec(SpacePtr space, std::optional<OperatorMatrix> matrix, std::optional<Preset> preset)
    : space_(std::move(space)), matrix_(std::move(matrix)), preset_(std::move(preset)) {
  if (matrix_) {
    radius_ = max_abs_eigenvalue(matrix_->entries());
  } else {
    const auto& kicked = std::get<KickedRotorPreset>(*preset_);
    const SeparableParts peak = parts_of(*space_, *preset_, 0.0);
    radius_ = peak.kinetic.cwiseAbs().maxCoeff() + 2.0 * std::abs(kicked.kick) / kicked.pulse_width;
  }
}

HamiltonianSpec HamiltonianSpec::from_matrix(const OperatorMatrix& h) {
  if (!is_hermitian(h.entries())) throw std::invalid_argument("Hamiltonian matrix must be Hermitian");
  return HamiltonianSpec(h.space(), h.in_basis(Basis::position).with_kind(OperatorKind::hermitian), std::nullopt);
}

HamiltonianSpec HamiltonianSpec::from_symbol(const WeylSymbol& h) {
  if (h.max_imag() > OperatorMatrix::kValidationTolerance) {
    throw std::invalid_argument("Hamiltonian symbol must be real");
  }
  return HamiltonianSpec(h.space(), inverse_weyl(WeylSymbol::from_real(h.space(), h.real()), OperatorKind::hermitian),
                         std::nullopt);
}

HamiltonianSpec HamiltonianSpec::preset(SpacePtr space, Preset p) {
  if (std::holds_alternative<KickedRotorPreset>(p)) {
    kick_pulse(std::get<KickedRotorPreset>(p), 0.0);  // validates parameters
    return HamiltonianSpec(std::move(space), std::nullopt, std::move(p));
  }
  OperatorMatrix m(space, assemble(*space, parts_of(*space, p, 0.0)), Basis::position, OperatorKind::hermitian);
  return HamiltonianSpec(std::move(space), std::move(m), std::move(p));
}

bool HamiltonianSpec::time_dependent() const noexcept { return !matrix_.has_value(); }

OperatorMatrix HamiltonianSpec::matrix_at(double t) const {
  if (matrix_) return *matrix_;
  return OperatorMatrix(space_, assemble(*space_, parts_of(*space_, *preset_, t)), Basis::position,
                        OperatorKind::hermitian);
}

WeylSymbol HamiltonianSpec::symbol_at(double t) const {
  if (preset_) {
    // Symbols of V(Q) + T(P) are V(q) + T(p) exactly.
    const SeparableParts parts = parts_of(*space_, *preset_, t);
    const int n = space_->dimension();
    RealMatrix grid(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) grid(p, q) = parts.potential(q) + parts.kinetic(p);
    return WeylSymbol::from_real(space_, grid);
  }
  WeylSymbol sym = weyl_symbol(*matrix_);
  return WeylSymbol::from_real(space_, sym.real());
}

std::optional<SeparableParts> HamiltonianSpec::separable_at(double t) const {
  if (!preset_) return std::nullopt;
  return parts_of(*space_, *preset_, t);
}

double HamiltonianSpec::spectral_radius() const { return radius_; }

}  // namespace phasespace
