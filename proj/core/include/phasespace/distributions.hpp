#pragma once

#include <optional>
#include <string_view>

#include "phasespace/weyl.hpp"

namespace phasespace {

enum class DistributionKind { wigner, husimi, p_function, custom_smoothed };

std::string_view to_string(DistributionKind kind);
DistributionKind distribution_kind_from_string(std::string_view name);

/// Quasi-probability distribution over (p, q). Normalised so that
/// (1/N) sum grid = 1 for Wigner distributions of density operators.
class QuasiDistribution {
 public:
  QuasiDistribution(SpacePtr space, ComplexMatrix grid, DistributionKind kind,
                    std::optional<ComplexMatrix> smoothing = std::nullopt);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexMatrix& grid() const noexcept { return grid_; }
  DistributionKind kind() const noexcept { return kind_; }
  /// The window g(u, v) applied to the Wigner characteristic function, if any.
  const std::optional<ComplexMatrix>& smoothing() const noexcept { return smoothing_; }
  int dimension() const noexcept { return space_->dimension(); }

  RealMatrix real() const { return grid_.real(); }
  double max_imag() const { return grid_.imag().cwiseAbs().maxCoeff(); }

  /// (1/N) sum over the grid.
  double normalization() const { return grid_.real().sum() / dimension(); }

 private:
  SpacePtr space_;
  ComplexMatrix grid_;
  DistributionKind kind_;
  std::optional<ComplexMatrix> smoothing_;
};

/// Wigner distribution of a density operator (its Weyl symbol, made real).
QuasiDistribution wigner_of(const OperatorMatrix& state);

/// Multiplies the Wigner characteristic function by g(u, v) and transforms back.
QuasiDistribution smoothed_distribution(const OperatorMatrix& state, const ComplexMatrix& window,
                                        DistributionKind kind = DistributionKind::custom_smoothed);

/// The window that converts a Wigner characteristic function into the given
/// ordering: omega^{-2uv} (normal), omega^{2uv} (antinormal), 1 (symmetric).
ComplexMatrix ordering_window(const DualBasisSpace& space, Ordering ordering);

/// Distribution from the ordered characteristic function. Normal ordering
/// gives the lattice P-function; these phase windows are exactly invertible.
QuasiDistribution ordered_distribution(const OperatorMatrix& state, Ordering ordering);

/// Default frame width sqrt(N / 4 pi), for which the wavepacket has equal
/// widths in q and p.
double default_frame_width(int dimension);

/// Lattice Gaussian window g(u, v) whose smoothing of the Wigner function
/// reproduces the Husimi function of a frame of width sigma.
///
/// Evaluates the ambiguity function of the periodised Gaussian in closed form,
///   sum_{m,n} (-1)^{mn} exp(-(2v + mN)^2 / (8 sigma^2))
///                     exp(-sigma^2 (4 pi u / N + 2 pi n)^2 / 2),
/// normalised to g(0, 0) = 1. The leading term is the plain Gaussian
/// exp(-sigma^2 (k_u^2 + k_v^2) / 2) with k_u = 2 pi c(2u) / N and
/// k_v = c(2v) / (2 sigma^2), c the centred label; the remaining terms are
/// the wrap-around images on the torus, which matter at small N.
ComplexMatrix gaussian_window(const DualBasisSpace& space, double sigma);

/// Family of normalised periodised Gaussian wavepackets, one per phase-space
/// point, obtained by displacing a fiducial packet centred at (0, 0).
class CoherentFrame {
 public:
  CoherentFrame(SpacePtr space, double sigma);

  const SpacePtr& space() const noexcept { return space_; }
  double sigma() const noexcept { return sigma_; }

  const ComplexVector& fiducial() const noexcept { return fiducial_; }

  /// X^q Z^p |fiducial>: psi(r) = omega^{p (r - q)} psi_0(r - q).
  ComplexVector state(int p, int q) const;

  /// (1/N) sum_{p,q} |state><state|. Exactly the identity for this
  /// Weyl-Heisenberg covariant frame.
  ComplexMatrix resolution() const;

 private:
  SpacePtr space_;
  double sigma_;
  ComplexVector fiducial_;
};

/// Wavepacket state |psi><psi| centred at (p, q) with width sigma.
OperatorMatrix wavepacket_state(const SpacePtr& space, int p, int q, double sigma);

/// grid(p, q) = <frame(p, q)| state |frame(p, q)>; real and nonnegative.
QuasiDistribution husimi_of(const OperatorMatrix& state, const CoherentFrame& frame);

struct Marginals {
  Eigen::VectorXd position;  // (1/N) sum_p grid(p, q)
  Eigen::VectorXd momentum;  // (1/N) sum_q grid(p, q)
};

Marginals marginals(const QuasiDistribution& dist);

/// (1/N) sum grid^2, which equals Tr(rho^2) for a Wigner distribution.
double purity(const QuasiDistribution& dist);

}  // namespace phasespace
