#include "phasespace/thirdq.hpp"

#include "phasespace/dynamics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace phasespace {

ModeDecomposition::ModeDecomposition(SpacePtr space, ComplexVector coefficients, Statistics statistics)
    : space_(std::move(space)), coefficients_(std::move(coefficients)), statistics_(statistics) {
  if (coefficients_.size() != space_->dimension()) throw std::invalid_argument("one coefficient per mode expected");
}

ComplexVector ModeDecomposition::momentum_coefficients() const { return space_->overlap() * coefficients_; }

ModeDecomposition ModeDecomposition::from_momentum(SpacePtr space, const ComplexVector& momentum,
                                                   Statistics statistics) {
  ComplexVector q = space->overlap().adjoint() * momentum;
  return ModeDecomposition(std::move(space), std::move(q), statistics);
}

CorrelationState::CorrelationState(SpacePtr space, ComplexMatrix g, Statistics statistics)
    : space_(std::move(space)), g_(std::move(g)), statistics_(statistics) {
  const int n = space_->dimension();
  if (g_.rows() != n || g_.cols() != n) throw std::invalid_argument("correlation matrix must be N x N");
  if (!is_hermitian(g_, kTolerance)) throw std::invalid_argument("correlation matrix must be Hermitian");
  const Eigen::VectorXd occ = occupations();
  if (occ.minCoeff() < -kTolerance) throw std::invalid_argument("correlation matrix has negative occupation");
  if (statistics_ == Statistics::fermion && occ.maxCoeff() > 1.0 + kTolerance) {
    throw std::invalid_argument("fermion occupations must lie in [0, 1]");
  }
}

Eigen::VectorXd CorrelationState::occupations() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

QuasiDistribution klimontovich_average(const CorrelationState& corr) {
  // The anti-diagonal sum is exactly the lattice Weyl transform of G viewed
  // as an operator on the mode space.
  const WeylSymbol sym = weyl_symbol(OperatorMatrix(corr.space(), corr.matrix()));
  return QuasiDistribution(corr.space(), sym.grid().real().cast<Complex>(), DistributionKind::wigner);
}

CorrelationState ballistic_step_corr(const CorrelationState& corr, const OperatorMatrix& h, double dt) {
  require_same_space(*corr.space(), *h.space(), "ballistic_step_corr");
  if (!is_hermitian(h.entries())) throw std::invalid_argument("ballistic_step_corr: h must be Hermitian");
  const OperatorMatrix g(corr.space(), corr.matrix());
  ComplexMatrix next = exact_evolution(g, h, dt).entries();
  next = (0.5 * (next + next.adjoint())).eval();
  return CorrelationState(corr.space(), std::move(next), corr.statistics());
}

Complex OneBodyTable::expectation(const CorrelationState& corr) const {
  // sum_{1,2} V(1,2) G[2][1]
  return (v_.cwiseProduct(corr.matrix().transpose())).sum();
}

OneBodyTable assemble_one_body(const OperatorMatrix& a) {
  const DualBasisSpace& s = *a.space();
  const int n = s.dimension();
  const WeylSymbol sym = weyl_symbol(a);
  // W(q + v, q - v) = (1/N) sum_p omega^{2 p v} A(p, q) = <q + v|A|q - v>.
  ComplexMatrix v(n, n);
  for (int q = 0; q < n; ++q) {
    for (int w = 0; w < n; ++w) {
      Complex acc = 0.0;
      for (int p = 0; p < n; ++p) acc += s.omega(2LL * p * w) * sym.grid()(p, q);
      v(s.wrap(q + w), s.wrap(q - w)) = acc / static_cast<double>(n);
    }
  }
  return OneBodyTable(std::move(v));
}

FourIndexTable::FourIndexTable(int modes) : m_(modes) {
  if (modes <= 0) throw std::invalid_argument("table needs at least one mode");
  data_.assign(static_cast<std::size_t>(modes) * modes * modes * modes, Complex(0.0));
}

double FourIndexTable::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) worst = std::max(worst, std::abs((*this)(i, j, k, l) - std::conj((*this)(l, k, j, i))));
  return worst;
}

FourIndexTable contact_interaction(int modes, double strength) {
  FourIndexTable t(modes);
  for (int r = 0; r < modes; ++r) t(r, r, r, r) = strength;
  return t;
}

Complex TwoBodyTable::wick_expectation(const CorrelationState& corr) const {
  const int m = v_.modes();
  if (corr.matrix().rows() != m) throw std::invalid_argument("table and correlation matrix mode counts differ");
  const ComplexMatrix& g = corr.matrix();
  const double sign = corr.statistics() == Statistics::boson ? 1.0 : -1.0;
  Complex acc = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const Complex v = v_(i, j, k, l);
          if (v == Complex(0.0)) continue;
          acc += v * (g(l, i) * g(k, j) + sign * g(k, i) * g(l, j));
        }
  return acc;
}

TwoBodyTable assemble_two_body(const FourIndexTable& matrix_elements) {
  const double defect = matrix_elements.hermiticity_defect();
  if (defect > 1e-10) {
    throw std::invalid_argument("two-body table violates V(1,2,3,4) = conj V(4,3,2,1) by " + std::to_string(defect));
  }
  return TwoBodyTable(matrix_elements);
}

void TransportInputs::validate(std::size_t energy_count) const {
  auto check_count = [&](const std::vector<WeylSymbol>& v, const char* name) {
    if (v.size() != 1 && v.size() != energy_count) {
      throw std::invalid_argument(std::string("transport input '") + name +
                                  "' needs one symbol or one per energy slice");
    }
  };
  auto check_nonnegative = [](const std::vector<WeylSymbol>& v, const char* name) {
    for (const auto& s : v) {
      if (s.grid().real().minCoeff() < 0.0 || s.max_imag() > 1e-12) {
        throw std::invalid_argument(std::string("transport input '") + name + "' must be real and >= 0 everywhere");
      }
    }
  };
  check_count(hamiltonian, "hamiltonian");
  check_count(injection, "injection");
  check_count(broadening, "broadening");
  check_count(retarded_real, "retarded_real");
  check_count(spectral, "spectral");
  check_nonnegative(broadening, "broadening");
  check_nonnegative(spectral, "spectral");
}

namespace {

const WeylSymbol& slice_of(const std::vector<WeylSymbol>& v, std::size_t e) { return v.size() == 1 ? v[0] : v[e]; }

}  // namespace

EnergyResolvedSymbols transport_step(const EnergyResolvedSymbols& f, const TransportInputs& inputs, double dt) {
  if (f.slices.empty() || f.slices.size() != f.energies.size()) {
    throw std::invalid_argument("transport_step needs one slice per energy point");
  }
  inputs.validate(f.slices.size());
  EnergyResolvedSymbols next = f;
  for (std::size_t e = 0; e < f.slices.size(); ++e) {
    const SpacePtr& space = f.slices[e].space();
    const ComplexMatrix h = inverse_weyl(slice_of(inputs.hamiltonian, e)).entries();
    const ComplexMatrix gamma = inverse_weyl(slice_of(inputs.broadening, e)).entries();
    // Source terms do not depend on f.
    const WeylSymbol source_sym = [&] {
      const ComplexMatrix s = inverse_weyl(slice_of(inputs.injection, e)).entries();
      const ComplexMatrix re_g = inverse_weyl(slice_of(inputs.retarded_real, e)).entries();
      const ComplexMatrix a = inverse_weyl(slice_of(inputs.spectral, e)).entries();
      const ComplexMatrix m = Complex(0.0, -1.0) * (s * re_g - re_g * s) + 0.5 * (s * a + a * s);
      return weyl_symbol(OperatorMatrix(space, m));
    }();
    auto rhs = [&](const ComplexMatrix& grid) {
      const ComplexMatrix x = inverse_weyl(WeylSymbol(space, grid)).entries();
      const ComplexMatrix m = Complex(0.0, -1.0) * (h * x - x * h) - 0.5 * (gamma * x + x * gamma);
      return ComplexMatrix(weyl_symbol(OperatorMatrix(space, m)).grid() + source_sym.grid());
    };
    ComplexMatrix g = f.slices[e].grid();
    const ComplexMatrix k1 = rhs(g);
    const ComplexMatrix k2 = rhs(g + 0.5 * dt * k1);
    const ComplexMatrix k3 = rhs(g + 0.5 * dt * k2);
    const ComplexMatrix k4 = rhs(g + dt * k3);
    g += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.slices[e] = WeylSymbol(space, std::move(g));
  }
  return next;
}

QuasiDistribution energy_integrate(const EnergyResolvedSymbols& f) {
  if (f.slices.empty()) throw std::invalid_argument("energy_integrate: empty energy mesh");
  if (f.slices.size() != f.energies.size()) throw std::invalid_argument("one energy per slice expected");
  const SpacePtr& space = f.slices.front().space();
  if (f.slices.size() == 1) {
    return QuasiDistribution(space, f.single_slice_weight * f.slices.front().grid(), DistributionKind::wigner);
  }
  for (std::size_t e = 1; e < f.energies.size(); ++e) {
    if (!(f.energies[e] > f.energies[e - 1])) throw std::invalid_argument("energy mesh must be strictly increasing");
  }
  const int n = space->dimension();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (std::size_t e = 1; e < f.slices.size(); ++e) {
    const double h = f.energies[e] - f.energies[e - 1];
    acc += 0.5 * h * (f.slices[e - 1].grid() + f.slices[e].grid());
  }
  return QuasiDistribution(space, std::move(acc), DistributionKind::wigner);
}

}  // namespace phasespace
