#include "phasespace/space.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace phasespace {

DualBasisSpace::DualBasisSpace(int dimension) : n_(dimension), inv2_(0) {
  if (dimension < 3 || dimension % 2 == 0) {
    throw std::invalid_argument("N must be odd and at least 3 (got " + std::to_string(dimension) +
                                "); 2 needs an inverse modulo N");
  }
  inv2_ = (n_ + 1) / 2;
  roots_.resize(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n_;
    roots_[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_));
  overlap_.resize(n_, n_);
  for (int p = 0; p < n_; ++p) {
    for (int q = 0; q < n_; ++q) {
      overlap_(p, q) = norm * std::conj(omega(static_cast<long long>(p) * q));
    }
  }
}

SpacePtr make_space(int dimension) { return std::make_shared<const DualBasisSpace>(dimension); }

Complex dual_overlap(const DualBasisSpace& space, int p, int q) {
  if (!space.contains(p) || !space.contains(q)) {
    throw std::out_of_range("lattice label out of range 0.." + std::to_string(space.dimension() - 1));
  }
  return std::conj(space.omega(static_cast<long long>(p) * q));
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_same_space(const DualBasisSpace& a, const DualBasisSpace& b, const char* what) {
  if (&a != &b && a.dimension() != b.dimension()) {
    throw std::invalid_argument(std::string(what) + ": operands live on different lattices (N=" +
                                std::to_string(a.dimension()) + " vs N=" + std::to_string(b.dimension()) +
                                ")");
  }
}

namespace {

void validate(const ComplexMatrix& m, OperatorKind kind) {
  if (kind == OperatorKind::general) return;
  if (!is_hermitian(m)) throw std::invalid_argument("operator tagged Hermitian is not Hermitian");
  if (kind == OperatorKind::density) {
    const Complex tr = m.trace();
    if (std::abs(tr - 1.0) > OperatorMatrix::kValidationTolerance) {
      throw std::invalid_argument("density operator must have unit trace (got " +
                                  std::to_string(tr.real()) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -OperatorMatrix::kValidationTolerance) {
      throw std::invalid_argument("density operator has a negative eigenvalue");
    }
  }
}

}  // namespace

OperatorMatrix::OperatorMatrix(SpacePtr space, ComplexMatrix entries, Basis basis, OperatorKind kind)
    : space_(std::move(space)), entries_(std::move(entries)), basis_(basis), kind_(kind) {
  if (!space_) throw std::invalid_argument("operator requires a space");
  const int n = space_->dimension();
  if (entries_.rows() != n || entries_.cols() != n) {
    throw std::invalid_argument("operator matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  validate(entries_, kind_);
}

OperatorMatrix OperatorMatrix::identity(SpacePtr space) {
  const int n = space->dimension();
  return OperatorMatrix(std::move(space), ComplexMatrix::Identity(n, n), Basis::position, OperatorKind::hermitian);
}

OperatorMatrix OperatorMatrix::zero(SpacePtr space) {
  const int n = space->dimension();
  return OperatorMatrix(std::move(space), ComplexMatrix::Zero(n, n), Basis::position, OperatorKind::hermitian);
}

OperatorMatrix OperatorMatrix::in_basis(Basis target) const {
  if (target == basis_) return *this;
  const ComplexMatrix& t = space_->overlap();
  // Momentum components: A_p = T A_q T^dagger.
  ComplexMatrix converted =
      target == Basis::momentum ? ComplexMatrix(t * entries_ * t.adjoint()) : ComplexMatrix(t.adjoint() * entries_ * t);
  OperatorMatrix out(space_, std::move(converted), target, OperatorKind::general);
  out.kind_ = kind_;
  return out;
}

OperatorMatrix OperatorMatrix::with_kind(OperatorKind kind) const {
  return OperatorMatrix(space_, entries_, basis_, kind);
}

CanonicalPair canonical_operators(const SpacePtr& space) {
  const int n = space->dimension();
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) q(k, k) = static_cast<double>(k);
  Eigen::VectorXd labels(n);
  for (int k = 0; k < n; ++k) labels(k) = static_cast<double>(k);
  ComplexMatrix p = momentum_function(*space, labels);
  // Remove roundoff so the tag check is stable at large N.
  p = 0.5 * (p + p.adjoint()).eval();
  return {OperatorMatrix(space, std::move(q), Basis::position, OperatorKind::hermitian),
          OperatorMatrix(space, std::move(p), Basis::position, OperatorKind::hermitian)};
}

ComplexMatrix shift_matrix(const DualBasisSpace& space, int k) {
  const int n = space.dimension();
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < n; ++q) x(space.wrap(static_cast<long long>(q) + k), q) = 1.0;
  return x;
}

ComplexMatrix clock_matrix(const DualBasisSpace& space, int k) {
  const int n = space.dimension();
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < n; ++q) z(q, q) = space.omega(static_cast<long long>(k) * q);
  return z;
}

ComplexMatrix momentum_function(const DualBasisSpace& space, const Eigen::VectorXd& values) {
  const int n = space.dimension();
  if (values.size() != n) throw std::invalid_argument("momentum function needs one value per label");
  // <a|f(P)|b> = (1/N) sum_p omega^{p (a - b)} f(p); depends on a - b only.
  std::vector<Complex> column(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    Complex acc = 0.0;
    for (int p = 0; p < n; ++p) acc += space.omega(static_cast<long long>(p) * d) * values(p);
    column[static_cast<std::size_t>(d)] = acc / static_cast<double>(n);
  }
  ComplexMatrix m(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m(a, b) = column[static_cast<std::size_t>(space.wrap(a - b))];
  return m;
}

Complex ordering_phase(const DualBasisSpace& space, int u, int v, Ordering ordering) {
  const long long uv2 = 2LL * u * v;
  switch (ordering) {
    case Ordering::symmetric:
      return 1.0;
    case Ordering::normal:
      return space.omega(-uv2);
    case Ordering::antinormal:
      return space.omega(uv2);
  }
  return 1.0;
}

OperatorMatrix displacement_operator(const SpacePtr& space, const Displacement& d) {
  const DualBasisSpace& s = *space;
  const int n = s.dimension();
  // Normal product exp{-2i v P} exp{2i u Q} = X^{2v} Z^{2u}:
  //   |q> -> omega^{2u q} |q + 2v>.
  // The symmetric operator carries the extra factor omega^{2uv}, which is the
  // exact lattice Baker-Campbell-Hausdorff phase (Z X = omega X Z).
  const Complex phase = s.omega(2LL * d.u * d.v) * ordering_phase(s, d.u, d.v, d.ordering);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < n; ++q) {
    m(s.wrap(static_cast<long long>(q) + 2LL * d.v), q) = phase * s.omega(2LL * d.u * q);
  }
  return OperatorMatrix(space, std::move(m));
}

}  // namespace phasespace
