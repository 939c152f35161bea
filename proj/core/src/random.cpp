#include "phasespace/random.hpp"

namespace phasespace {

ComplexMatrix random_gaussian_matrix(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      m(r, c) = Complex(re, normal(rng));
    }
  return m;
}

OperatorMatrix random_hermitian(const SpacePtr& space, Rng& rng) {
  const int n = space->dimension();
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return OperatorMatrix(space, 0.5 * (g + g.adjoint()), Basis::position, OperatorKind::hermitian);
}

OperatorMatrix random_density(const SpacePtr& space, Rng& rng) {
  const int n = space->dimension();
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return OperatorMatrix(space, std::move(rho), Basis::position, OperatorKind::density);
}

OperatorMatrix random_pure_state(const SpacePtr& space, Rng& rng) {
  const int n = space->dimension();
  ComplexVector psi = random_gaussian_matrix(n, 1, rng).col(0);
  psi.normalize();
  return OperatorMatrix(space, psi * psi.adjoint(), Basis::position, OperatorKind::density);
}

WeylSymbol random_real_symbol(const SpacePtr& space, Rng& rng) {
  const int n = space->dimension();
  std::normal_distribution<double> normal;
  RealMatrix grid(n, n);
  for (int q = 0; q < n; ++q)
    for (int p = 0; p < n; ++p) grid(p, q) = normal(rng);
  return WeylSymbol::from_real(space, grid);
}

}  // namespace phasespace
