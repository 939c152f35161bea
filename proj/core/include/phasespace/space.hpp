#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace phasespace {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Finite lattice Z_N carrying the two dual eigenbases |q> and |p>.
///
/// Both bases are labelled by 0..N-1. They are tied together by the kernel
/// <p|q> = exp(-2 pi i p q / N), so that T[p][q] = <p|q> / sqrt(N) is the
/// unitary change of basis from position to momentum components. N must be
/// odd so that multiplication by 2 is a bijection on the lattice.
class DualBasisSpace {
 public:
  explicit DualBasisSpace(int dimension);

  int dimension() const noexcept { return n_; }

  /// Multiplicative inverse of 2 modulo N.
  int inverse_of_two() const noexcept { return inv2_; }

  /// Reduce any integer into 0..N-1.
  int wrap(long long k) const noexcept {
    long long r = k % n_;
    return static_cast<int>(r < 0 ? r + n_ : r);
  }

  /// k / 2 on the lattice, i.e. the unique h with 2h = k (mod N).
  int half(long long k) const noexcept { return wrap(wrap(k) * static_cast<long long>(inv2_)); }

  /// Map a label to the centred representative in (-N/2, N/2).
  int centred(long long k) const noexcept {
    int r = wrap(k);
    return r > n_ / 2 ? r - n_ : r;
  }

  /// omega^k with omega = exp(2 pi i / N); k is reduced modulo N.
  Complex omega(long long k) const noexcept { return roots_[static_cast<std::size_t>(wrap(k))]; }

  /// Unitary overlap matrix T[p][q] = <p|q> / sqrt(N).
  const ComplexMatrix& overlap() const noexcept { return overlap_; }

  bool contains(long long label) const noexcept { return label >= 0 && label < n_; }

 private:
  int n_;
  int inv2_;
  std::vector<Complex> roots_;
  ComplexMatrix overlap_;
};

using SpacePtr = std::shared_ptr<const DualBasisSpace>;

/// Builds the dual basis space of odd dimension N >= 3.
SpacePtr make_space(int dimension);

/// <p|q> = exp(-2 pi i p q / N).
Complex dual_overlap(const DualBasisSpace& space, int p, int q);

enum class Basis { position, momentum };

enum class OperatorKind { general, hermitian, density };

/// An N x N operator expressed in one of the two lattice bases.
///
/// Hermitian- and density-tagged operators are validated on construction
/// (to 1e-10), so holding one is a proof of the tag.
class OperatorMatrix {
 public:
  static constexpr double kValidationTolerance = 1e-10;

  OperatorMatrix(SpacePtr space, ComplexMatrix entries, Basis basis = Basis::position,
                 OperatorKind kind = OperatorKind::general);

  static OperatorMatrix identity(SpacePtr space);
  static OperatorMatrix zero(SpacePtr space);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexMatrix& entries() const noexcept { return entries_; }
  Basis basis() const noexcept { return basis_; }
  OperatorKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return space_->dimension(); }

  Complex operator()(int row, int col) const { return entries_(row, col); }

  /// Same operator expressed in the requested basis.
  OperatorMatrix in_basis(Basis target) const;

  /// Re-tag the operator; throws if the new tag's invariants fail.
  OperatorMatrix with_kind(OperatorKind kind) const;

  Complex trace() const { return entries_.trace(); }

 private:
  SpacePtr space_;
  ComplexMatrix entries_;
  Basis basis_;
  OperatorKind kind_;
};

bool is_hermitian(const ComplexMatrix& m, double tol = OperatorMatrix::kValidationTolerance);

/// Throws std::invalid_argument unless both operands live on the same lattice.
void require_same_space(const DualBasisSpace& a, const DualBasisSpace& b, const char* what);

struct CanonicalPair {
  OperatorMatrix position;  // Q, diagonal in the q-basis
  OperatorMatrix momentum;  // P, diagonal in the p-basis, expressed in the q-basis
};

CanonicalPair canonical_operators(const SpacePtr& space);

/// Operator ordering of a displacement (and of characteristic functions).
/// `symmetric` is the Weyl ordering that yields the Wigner characteristic function.
enum class Ordering { symmetric, normal, antinormal };

struct Displacement {
  int u = 0;
  int v = 0;
  Ordering ordering = Ordering::symmetric;
};

/// Scalar relating an ordered displacement to the symmetric one:
/// D_ordered(u,v) = ordering_phase(u,v) * D_symmetric(u,v).
Complex ordering_phase(const DualBasisSpace& space, int u, int v, Ordering ordering);

/// Displacement operator exp{-2i[P v - Q u]} and its normal/antinormal
/// factorisations, built from exact cyclic shifts and diagonal phases.
OperatorMatrix displacement_operator(const SpacePtr& space, const Displacement& d);

/// Cyclic shift X^k : |q> -> |q + k>.
ComplexMatrix shift_matrix(const DualBasisSpace& space, int k);

/// Diagonal phase Z^k : |q> -> omega^{k q} |q>.
ComplexMatrix clock_matrix(const DualBasisSpace& space, int k);

/// Operator f(P) in the q-basis for a function tabulated over momentum labels.
ComplexMatrix momentum_function(const DualBasisSpace& space, const Eigen::VectorXd& values);

}  // namespace phasespace
