#include "phasespace/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasespace {

std::string_view to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::wigner:
      return "wigner";
    case DistributionKind::husimi:
      return "husimi";
    case DistributionKind::p_function:
      return "p_function";
    case DistributionKind::custom_smoothed:
      return "custom_smoothed";
  }
  return "unknown";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
  for (auto kind : {DistributionKind::wigner, DistributionKind::husimi, DistributionKind::p_function,
                    DistributionKind::custom_smoothed}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown distribution kind '" + std::string(name) + "'");
}

QuasiDistribution::QuasiDistribution(SpacePtr space, ComplexMatrix grid, DistributionKind kind,
                                     std::optional<ComplexMatrix> smoothing)
    : space_(std::move(space)), grid_(std::move(grid)), kind_(kind), smoothing_(std::move(smoothing)) {
  if (!space_) throw std::invalid_argument("distribution requires a space");
  const int n = space_->dimension();
  if (grid_.rows() != n || grid_.cols() != n) throw std::invalid_argument("distribution grid must be N x N");
}

namespace {

constexpr double kRealTolerance = 1e-10;

void require_density(const OperatorMatrix& state, const char* what) {
  if (state.kind() != OperatorKind::density) {
    throw std::invalid_argument(std::string(what) + " expects a density-tagged operator");
  }
}

}  // namespace

QuasiDistribution wigner_of(const OperatorMatrix& state) {
  require_density(state, "wigner_of");
  WeylSymbol sym = weyl_symbol(state);
  if (sym.max_imag() > kRealTolerance) {
    throw std::runtime_error("Wigner function of a density operator came out complex (max imag " +
                             std::to_string(sym.max_imag()) + ")");
  }
  return QuasiDistribution(state.space(), sym.grid().real().cast<Complex>(), DistributionKind::wigner);
}

QuasiDistribution smoothed_distribution(const OperatorMatrix& state, const ComplexMatrix& window,
                                        DistributionKind kind) {
  const int n = state.dimension();
  if (window.rows() != n || window.cols() != n) throw std::invalid_argument("smoothing window must be N x N");
  const CharacteristicFn cf = characteristic_fn(state, Ordering::symmetric);
  CharacteristicFn smoothed(state.space(), cf.grid().cwiseProduct(window), Ordering::symmetric);
  WeylSymbol sym = symbol_from_characteristic(smoothed);
  return QuasiDistribution(state.space(), std::move(sym.grid()), kind, window);
}

ComplexMatrix ordering_window(const DualBasisSpace& space, Ordering ordering) {
  const int n = space.dimension();
  ComplexMatrix g(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) g(u, v) = ordering_phase(space, u, v, ordering);
  return g;
}

QuasiDistribution ordered_distribution(const OperatorMatrix& state, Ordering ordering) {
  switch (ordering) {
    case Ordering::symmetric:
      return smoothed_distribution(state, ordering_window(*state.space(), ordering), DistributionKind::wigner);
    case Ordering::normal:
      return smoothed_distribution(state, ordering_window(*state.space(), ordering), DistributionKind::p_function);
    case Ordering::antinormal:
      break;
  }
  return smoothed_distribution(state, ordering_window(*state.space(), ordering), DistributionKind::custom_smoothed);
}

double default_frame_width(int dimension) { return std::sqrt(dimension / (4.0 * std::numbers::pi)); }

namespace {

// Number of periodic images needed for a Gaussian exp(-x^2 / (2 s^2)) sampled
// with period `period` to converge below ~1e-20 relative.
int image_count(double s, double period) { return 2 + static_cast<int>(std::ceil(10.0 * s / period)); }

}  // namespace

ComplexMatrix gaussian_window(const DualBasisSpace& space, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("frame width sigma must be positive");
  const int n = space.dimension();
  const double two_pi = 2.0 * std::numbers::pi;
  // Image ranges: the v-factor is a Gaussian of width 2 sigma in D = 2v + mN;
  // the u-factor a Gaussian of width 1/sigma in theta + 2 pi n.
  const int m_max = image_count(2.0 * sigma, n) + 2;
  const int n_max = image_count(1.0 / sigma, two_pi) + 2;
  auto raw = [&](int u, int v) {
    double acc = 0.0;
    const double theta = 2.0 * two_pi * u / n;
    for (int m = -m_max; m <= m_max; ++m) {
      const double d = 2.0 * v + static_cast<double>(m) * n;
      const double fv = std::exp(-d * d / (8.0 * sigma * sigma));
      if (fv == 0.0) continue;
      for (int k = -n_max; k <= n_max; ++k) {
        const double t = theta + two_pi * k;
        const double sign = ((m * k) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * fv * std::exp(-0.5 * sigma * sigma * t * t);
      }
    }
    return acc;
  };
  // Use centred labels so the image sums converge from the nearest term.
  const double norm = raw(0, 0);
  ComplexMatrix g(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) g(u, v) = raw(space.centred(u), space.centred(v)) / norm;
  return g;
}

CoherentFrame::CoherentFrame(SpacePtr space, double sigma) : space_(std::move(space)), sigma_(sigma) {
  if (!space_) throw std::invalid_argument("frame requires a space");
  if (!(sigma > 0.0)) throw std::invalid_argument("frame width sigma must be positive");
  const int n = space_->dimension();
  const int images = image_count(std::sqrt(2.0) * sigma, n);
  fiducial_.resize(n);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int j = -images; j <= images; ++j) {
      const double x = r + static_cast<double>(j) * n;
      acc += std::exp(-x * x / (4.0 * sigma * sigma));
    }
    fiducial_(r) = acc;
  }
  fiducial_.normalize();
}

ComplexVector CoherentFrame::state(int p, int q) const {
  const DualBasisSpace& s = *space_;
  const int n = s.dimension();
  ComplexVector psi(n);
  for (int r = 0; r < n; ++r) {
    const int shifted = s.wrap(static_cast<long long>(r) - q);
    psi(r) = s.omega(static_cast<long long>(p) * shifted) * fiducial_(shifted);
  }
  return psi;
}

ComplexMatrix CoherentFrame::resolution() const {
  const int n = space_->dimension();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const ComplexVector psi = state(p, q);
      acc.noalias() += psi * psi.adjoint();
    }
  }
  return acc / static_cast<double>(n);
}

OperatorMatrix wavepacket_state(const SpacePtr& space, int p, int q, double sigma) {
  const CoherentFrame frame(space, sigma);
  const ComplexVector psi = frame.state(space->wrap(p), space->wrap(q));
  return OperatorMatrix(space, psi * psi.adjoint(), Basis::position, OperatorKind::density);
}

QuasiDistribution husimi_of(const OperatorMatrix& state, const CoherentFrame& frame) {
  require_density(state, "husimi_of");
  require_same_space(*state.space(), *frame.space(), "husimi_of");
  const int n = state.dimension();
  ComplexMatrix states(n, n * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) states.col(p * n + q) = frame.state(p, q);
  const ComplexMatrix applied = state.in_basis(Basis::position).entries() * states;
  ComplexMatrix grid(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const int c = p * n + q;
      grid(p, q) = std::real(states.col(c).dot(applied.col(c)));
    }
  }
  return QuasiDistribution(state.space(), std::move(grid), DistributionKind::husimi);
}

Marginals marginals(const QuasiDistribution& dist) {
  if (dist.kind() != DistributionKind::wigner) throw std::invalid_argument("marginals need a Wigner distribution");
  const double n = dist.dimension();
  const RealMatrix g = dist.real();
  return {g.colwise().sum().transpose() / n, g.rowwise().sum() / n};
}

double purity(const QuasiDistribution& dist) {
  return dist.grid().cwiseAbs2().sum() / dist.dimension();
}

}  // namespace phasespace
