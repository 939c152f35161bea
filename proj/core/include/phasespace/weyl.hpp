#pragma once

#include "phasespace/space.hpp"

namespace phasespace {

/// A function A(p, q) on the discrete phase space; grid(p, q).
class WeylSymbol {
 public:
  WeylSymbol(SpacePtr space, ComplexMatrix grid);

  static WeylSymbol constant(SpacePtr space, Complex value);
  static WeylSymbol from_real(SpacePtr space, const RealMatrix& grid);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexMatrix& grid() const noexcept { return grid_; }
  ComplexMatrix& grid() noexcept { return grid_; }
  int dimension() const noexcept { return space_->dimension(); }

  Complex operator()(int p, int q) const { return grid_(p, q); }

  /// (1/N) sum over the grid; equals the trace of the source operator.
  Complex phase_space_trace() const;

  double max_imag() const { return grid_.imag().cwiseAbs().maxCoeff(); }
  RealMatrix real() const { return grid_.real(); }

 private:
  SpacePtr space_;
  ComplexMatrix grid_;
};

/// Characteristic function grid(u, v) = Tr(A D(u, v)) for one ordering.
class CharacteristicFn {
 public:
  CharacteristicFn(SpacePtr space, ComplexMatrix grid, Ordering ordering);

  const SpacePtr& space() const noexcept { return space_; }
  const ComplexMatrix& grid() const noexcept { return grid_; }
  Ordering ordering() const noexcept { return ordering_; }

  /// Same function re-expressed for another ordering (exact phase change).
  CharacteristicFn reordered(Ordering target) const;

 private:
  SpacePtr space_;
  ComplexMatrix grid_;
  Ordering ordering_;
};

/// Delta(p, q) = sum_v omega^{2 p v} |q + v><q - v|, built on the q-side.
OperatorMatrix phase_point_operator(const SpacePtr& space, int p, int q);

/// Delta(p, q) = sum_u omega^{-2 u q} |p + u><p - u|, built from momentum
/// kets and returned in the q-basis. Agrees with phase_point_operator.
OperatorMatrix phase_point_operator_momentum_side(const SpacePtr& space, int p, int q);

/// A(p, q) = Tr(A Delta(p, q)) for every grid point, via length-N
/// transforms along the anti-diagonals of the matrix; O(N^2 log N).
WeylSymbol weyl_symbol(const OperatorMatrix& op);

/// Reference path: explicit trace against each phase-point operator; O(N^4).
WeylSymbol weyl_symbol_direct(const OperatorMatrix& op);

/// A(p, q) = sum_u omega^{2 u q} <p + u|A|p - u>, evaluated from momentum components.
WeylSymbol weyl_symbol_momentum_side(const OperatorMatrix& op);

/// (1/N) sum_{p,q} A(p, q) Delta(p, q); exact inverse of weyl_symbol.
OperatorMatrix inverse_weyl(const WeylSymbol& symbol, OperatorKind kind = OperatorKind::general);

/// grid(u, v) = Tr(op D_ordering(u, v)), computed through the symbol and a 2-D DFT.
CharacteristicFn characteristic_fn(const OperatorMatrix& op, Ordering ordering = Ordering::symmetric);

/// Reference path: explicit trace against each displacement operator.
CharacteristicFn characteristic_fn_direct(const OperatorMatrix& op, Ordering ordering = Ordering::symmetric);

/// C(u, v) = (1/N) sum_{p,q} A(p, q) omega^{-2(p v - q u)}.
CharacteristicFn characteristic_from_symbol(const WeylSymbol& symbol);

/// A(p, q) = (1/N) sum_{u,v} C(u, v) omega^{2(p v - q u)}.
/// Only accepts symmetric (Wigner) ordering.
WeylSymbol symbol_from_characteristic(const CharacteristicFn& cf);

/// Symbol of (-i)[X, Y] (the lattice Moyal bracket, times 2 sin of the bidirectional derivative).
WeylSymbol commutator_symbol(const WeylSymbol& x, const WeylSymbol& y);

/// Symbol of (XY + YX) / 2.
WeylSymbol anticommutator_symbol(const WeylSymbol& x, const WeylSymbol& y);

}  // namespace phasespace
