#include "phasespace/weyl.hpp"

#include <stdexcept>
#include <vector>

#include "fft.hpp"

namespace phasespace {

using detail::DftSign;
using detail::dft_blocks;

WeylSymbol::WeylSymbol(SpacePtr space, ComplexMatrix grid) : space_(std::move(space)), grid_(std::move(grid)) {
  if (!space_) throw std::invalid_argument("symbol requires a space");
  const int n = space_->dimension();
  if (grid_.rows() != n || grid_.cols() != n) throw std::invalid_argument("symbol grid must be N x N");
}

WeylSymbol WeylSymbol::constant(SpacePtr space, Complex value) {
  const int n = space->dimension();
  return WeylSymbol(std::move(space), ComplexMatrix::Constant(n, n, value));
}

WeylSymbol WeylSymbol::from_real(SpacePtr space, const RealMatrix& grid) {
  return WeylSymbol(std::move(space), grid.cast<Complex>());
}

Complex WeylSymbol::phase_space_trace() const { return grid_.sum() / static_cast<double>(dimension()); }

CharacteristicFn::CharacteristicFn(SpacePtr space, ComplexMatrix grid, Ordering ordering)
    : space_(std::move(space)), grid_(std::move(grid)), ordering_(ordering) {
  if (!space_) throw std::invalid_argument("characteristic function requires a space");
  const int n = space_->dimension();
  if (grid_.rows() != n || grid_.cols() != n) throw std::invalid_argument("characteristic grid must be N x N");
}

CharacteristicFn CharacteristicFn::reordered(Ordering target) const {
  if (target == ordering_) return *this;
  const DualBasisSpace& s = *space_;
  const int n = s.dimension();
  ComplexMatrix out(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      // Divide out the current ordering phase, then apply the target one.
      out(u, v) = grid_(u, v) * std::conj(ordering_phase(s, u, v, ordering_)) * ordering_phase(s, u, v, target);
    }
  }
  return CharacteristicFn(space_, std::move(out), target);
}

OperatorMatrix phase_point_operator(const SpacePtr& space, int p, int q) {
  const DualBasisSpace& s = *space;
  const int n = s.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int v = 0; v < n; ++v) {
    m(s.wrap(static_cast<long long>(q) + v), s.wrap(static_cast<long long>(q) - v)) = s.omega(2LL * p * v);
  }
  return OperatorMatrix(space, std::move(m), Basis::position, OperatorKind::hermitian);
}

OperatorMatrix phase_point_operator_momentum_side(const SpacePtr& space, int p, int q) {
  const DualBasisSpace& s = *space;
  const int n = s.dimension();
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    m(s.wrap(static_cast<long long>(p) + u), s.wrap(static_cast<long long>(p) - u)) = s.omega(-2LL * u * q);
  }
  OperatorMatrix in_momentum(space, std::move(m), Basis::momentum);
  OperatorMatrix in_position = in_momentum.in_basis(Basis::position);
  return in_position.with_kind(OperatorKind::hermitian);
}

namespace {

// Fast symbol evaluation on raw components M in the given basis, where the
// anti-diagonal sample is M(c - v, c + v) and the phase is omega^{sign * 2 r v}.
// Returns grid(r, c).
ComplexMatrix antidiagonal_transform(const DualBasisSpace& s, const ComplexMatrix& m, DftSign sign) {
  const int n = s.dimension();
  std::vector<Complex> buf(static_cast<std::size_t>(n) * n);
  for (int c = 0; c < n; ++c) {
    for (int v = 0; v < n; ++v) {
      buf[static_cast<std::size_t>(c) * n + v] = m(s.wrap(static_cast<long long>(c) - v), s.wrap(static_cast<long long>(c) + v));
    }
  }
  dft_blocks(buf.data(), n, n, sign);
  ComplexMatrix grid(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) grid(r, c) = buf[static_cast<std::size_t>(c) * n + s.wrap(2LL * r)];
  }
  return grid;
}

}  // namespace

WeylSymbol weyl_symbol(const OperatorMatrix& op) {
  const OperatorMatrix q = op.in_basis(Basis::position);
  return WeylSymbol(op.space(), antidiagonal_transform(*op.space(), q.entries(), DftSign::backward));
}

WeylSymbol weyl_symbol_direct(const OperatorMatrix& op) {
  const OperatorMatrix a = op.in_basis(Basis::position);
  const int n = op.dimension();
  ComplexMatrix grid(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      grid(p, q) = (a.entries() * phase_point_operator(op.space(), p, q).entries()).trace();
    }
  }
  return WeylSymbol(op.space(), std::move(grid));
}

WeylSymbol weyl_symbol_momentum_side(const OperatorMatrix& op) {
  const DualBasisSpace& s = *op.space();
  const OperatorMatrix a = op.in_basis(Basis::momentum);
  // grid(q, p) = sum_u omega^{2 q u} <p - (-u)|A|p + (-u)>; relabel u -> -u to reuse
  // the anti-diagonal kernel, which samples M(c - v, c + v) with omega^{2 r v}.
  const ComplexMatrix transposed = antidiagonal_transform(s, a.entries(), DftSign::forward);
  return WeylSymbol(op.space(), transposed.transpose());
}

OperatorMatrix inverse_weyl(const WeylSymbol& symbol, OperatorKind kind) {
  const DualBasisSpace& s = *symbol.space();
  const int n = s.dimension();
  std::vector<Complex> buf(static_cast<std::size_t>(n) * n);
  for (int q = 0; q < n; ++q) {
    for (int k = 0; k < n; ++k) buf[static_cast<std::size_t>(q) * n + k] = symbol.grid()(s.half(k), q);
  }
  dft_blocks(buf.data(), n, n, DftSign::forward);
  ComplexMatrix m(n, n);
  const double scale = 1.0 / n;
  for (int q = 0; q < n; ++q) {
    for (int v = 0; v < n; ++v) {
      m(s.wrap(static_cast<long long>(q) - v), s.wrap(static_cast<long long>(q) + v)) =
          scale * buf[static_cast<std::size_t>(q) * n + v];
    }
  }
  if (kind != OperatorKind::general) m = (0.5 * (m + m.adjoint())).eval();
  return OperatorMatrix(symbol.space(), std::move(m), Basis::position, kind);
}

CharacteristicFn characteristic_from_symbol(const WeylSymbol& symbol) {
  const DualBasisSpace& s = *symbol.space();
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  // F_q(a) = sum_p A(p, q) omega^{-p a}; the column-major grid is contiguous in p.
  std::vector<Complex> f(symbol.grid().data(), symbol.grid().data() + nn * nn);
  dft_blocks(f.data(), n, n, DftSign::forward);
  // G(a, b) = sum_q F_q(a) omega^{q b}.
  std::vector<Complex> g(nn * nn);
  for (std::size_t q = 0; q < nn; ++q)
    for (std::size_t a = 0; a < nn; ++a) g[a * nn + q] = f[q * nn + a];
  dft_blocks(g.data(), n, n, DftSign::backward);
  ComplexMatrix grid(n, n);
  const double scale = 1.0 / n;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      grid(u, v) = scale * g[static_cast<std::size_t>(s.wrap(2LL * v)) * nn + static_cast<std::size_t>(s.wrap(2LL * u))];
    }
  }
  return CharacteristicFn(symbol.space(), std::move(grid), Ordering::symmetric);
}

WeylSymbol symbol_from_characteristic(const CharacteristicFn& cf) {
  if (cf.ordering() != Ordering::symmetric) {
    throw std::invalid_argument("symbol_from_characteristic needs a Wigner (symmetric) ordered function; "
                                "call reordered(Ordering::symmetric) first");
  }
  const DualBasisSpace& s = *cf.space();
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  // X[b][a] = C(u = b/2, v = a/2); then sum_a X omega^{p a}, sum_b omega^{-q b}.
  std::vector<Complex> x(nn * nn);
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(b) * nn + static_cast<std::size_t>(a)] = cf.grid()(s.half(b), s.half(a));
  dft_blocks(x.data(), n, n, DftSign::backward);
  std::vector<Complex> y(nn * nn);
  for (std::size_t b = 0; b < nn; ++b)
    for (std::size_t p = 0; p < nn; ++p) y[p * nn + b] = x[b * nn + p];
  dft_blocks(y.data(), n, n, DftSign::forward);
  ComplexMatrix grid(n, n);
  const double scale = 1.0 / n;
  for (std::size_t p = 0; p < nn; ++p)
    for (std::size_t q = 0; q < nn; ++q) grid(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = scale * y[p * nn + q];
  return WeylSymbol(cf.space(), std::move(grid));
}

CharacteristicFn characteristic_fn(const OperatorMatrix& op, Ordering ordering) {
  return characteristic_from_symbol(weyl_symbol(op)).reordered(ordering);
}

CharacteristicFn characteristic_fn_direct(const OperatorMatrix& op, Ordering ordering) {
  const OperatorMatrix a = op.in_basis(Basis::position);
  const int n = op.dimension();
  ComplexMatrix grid(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      grid(u, v) = (a.entries() * displacement_operator(op.space(), {u, v, ordering}).entries()).trace();
    }
  }
  return CharacteristicFn(op.space(), std::move(grid), ordering);
}

WeylSymbol commutator_symbol(const WeylSymbol& x, const WeylSymbol& y) {
  require_same_space(*x.space(), *y.space(), "commutator_symbol");
  const ComplexMatrix xm = inverse_weyl(x).entries();
  const ComplexMatrix ym = inverse_weyl(y).entries();
  const ComplexMatrix c = Complex(0.0, -1.0) * (xm * ym - ym * xm);
  return weyl_symbol(OperatorMatrix(x.space(), c));
}

WeylSymbol anticommutator_symbol(const WeylSymbol& x, const WeylSymbol& y) {
  require_same_space(*x.space(), *y.space(), "anticommutator_symbol");
  const ComplexMatrix xm = inverse_weyl(x).entries();
  const ComplexMatrix ym = inverse_weyl(y).entries();
  const ComplexMatrix c = 0.5 * (xm * ym + ym * xm);
  return weyl_symbol(OperatorMatrix(x.space(), c));
}

}  // namespace phasespace
