#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phasespace/random.hpp"
#include "phasespace/weyl.hpp"

using namespace phasespace;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Textbook definition, written out independently of the library:
// A(p, q) = sum_v exp(2 pi i 2 p v / N) <q - v|A|q + v>.
ComplexMatrix symbol_by_definition(const ComplexMatrix& a) {
  const int n = static_cast<int>(a.rows());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int v = 0; v < n; ++v)
        out(p, q) += std::polar(1.0, 2.0 * std::numbers::pi * 2.0 * p * v / n) *
                     a(((q - v) % n + n) % n, (q + v) % n);
  return out;
}

}  // namespace

TEST(PhasePoint, TraceIsOne) {
  for (int n : {3, 5, 9}) {
    const SpacePtr s = make_space(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) EXPECT_NEAR(std::abs(phase_point_operator(s, p, q).trace() - 1.0), 0.0, 1e-12);
  }
}

TEST(PhasePoint, HermitianAndAntiDiagonalSupport) {
  const int n = 7;
  const SpacePtr s = make_space(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const ComplexMatrix d = phase_point_operator(s, p, q).entries();
      EXPECT_LT(max_abs(d - d.adjoint()), 1e-14);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if ((a + b) % n != (2 * q) % n) {
            EXPECT_EQ(d(a, b), Complex(0.0));
          } else {
            // a = q + v, b = q - v
            const int v = s->half(a - b);
            EXPECT_NEAR(std::abs(d(a, b) - std::polar(1.0, 2.0 * std::numbers::pi * 2.0 * p * v / n)), 0.0, 1e-12);
          }
        }
    }
}

TEST(PhasePoint, ResolutionOfIdentity) {
  for (int n : {3, 5, 31}) {
    const SpacePtr s = make_space(n);
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) acc += phase_point_operator(s, p, q).entries();
    acc /= double(n);
    EXPECT_LT(max_abs(acc - ComplexMatrix::Identity(n, n)), 1e-10) << "N = " << n;
  }
}

TEST(PhasePoint, Orthogonality) {
  for (int n : {3, 5}) {
    const SpacePtr s = make_space(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int pp = 0; pp < n; ++pp)
          for (int qp = 0; qp < n; ++qp) {
            const Complex t =
                (phase_point_operator(s, p, q).entries() * phase_point_operator(s, pp, qp).entries()).trace();
            const double expect = (p == pp && q == qp) ? double(n) : 0.0;
            EXPECT_NEAR(std::abs(t - expect), 0.0, 1e-12);
          }
  }
}

TEST(PhasePoint, MomentumSideConstructionAgrees) {
  for (int n : {3, 5, 11}) {
    const SpacePtr s = make_space(n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const ComplexMatrix a = phase_point_operator(s, p, q).entries();
        const ComplexMatrix b = phase_point_operator_momentum_side(s, p, q).entries();
        EXPECT_LT(max_abs(a - b), 1e-12);
      }
  }
}

TEST(WeylSymbol, IdentityPositionAndProjector) {
  const int n = 7;
  const SpacePtr s = make_space(n);
  const WeylSymbol one = weyl_symbol(OperatorMatrix::identity(s));
  EXPECT_LT(max_abs(one.grid() - ComplexMatrix::Ones(n, n)), 1e-12);

  const WeylSymbol qs = weyl_symbol(canonical_operators(s).position);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) EXPECT_NEAR(std::abs(qs(p, q) - double(q)), 0.0, 1e-12);

  const int q0 = 3;
  ComplexMatrix proj = ComplexMatrix::Zero(n, n);
  proj(q0, q0) = 1.0;
  const WeylSymbol ps = weyl_symbol(OperatorMatrix(s, proj));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) EXPECT_NEAR(std::abs(ps(p, q) - (q == q0 ? 1.0 : 0.0)), 0.0, 1e-12);
}

TEST(WeylSymbol, FastSlowAndDefinitionAgree) {
  Rng rng(3);
  for (int n : {3, 5, 15, 31}) {
    const SpacePtr s = make_space(n);
    const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
    const ComplexMatrix ref = symbol_by_definition(a.entries());
    EXPECT_LT(max_abs(weyl_symbol(a).grid() - ref), 1e-10 * n);
    if (n <= 15) {
      EXPECT_LT(max_abs(weyl_symbol_direct(a).grid() - weyl_symbol(a).grid()), 1e-12 * n);
    }
  }
}

TEST(WeylSymbol, MomentumSideSymbolEqualsPositionSide) {
  Rng rng(5);
  for (int n : {3, 5, 15}) {
    const SpacePtr s = make_space(n);
    const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
    EXPECT_LT(max_abs(weyl_symbol_momentum_side(a).grid() - weyl_symbol(a).grid()), 1e-11);
  }
}

TEST(WeylSymbol, HermitianGivesRealSymbolAndTrace) {
  Rng rng(7);
  const SpacePtr s = make_space(15);
  const OperatorMatrix h = random_hermitian(s, rng);
  const WeylSymbol sym = weyl_symbol(h);
  EXPECT_LT(sym.max_imag(), 1e-10);
  EXPECT_NEAR(std::abs(sym.phase_space_trace() - h.trace()), 0.0, 1e-11);
  const OperatorMatrix rho = random_density(s, rng);
  EXPECT_NEAR(std::abs(weyl_symbol(rho).phase_space_trace() - 1.0), 0.0, 1e-12);
}

TEST(WeylSymbol, Linearity) {
  Rng rng(9);
  const int n = 11;
  const SpacePtr s = make_space(n);
  const ComplexMatrix a = random_gaussian_matrix(n, n, rng);
  const ComplexMatrix b = random_gaussian_matrix(n, n, rng);
  const Complex x(0.3, -1.2), y(2.0, 0.5);
  const ComplexMatrix lhs = weyl_symbol(OperatorMatrix(s, x * a + y * b)).grid();
  const ComplexMatrix rhs = x * weyl_symbol(OperatorMatrix(s, a)).grid() + y * weyl_symbol(OperatorMatrix(s, b)).grid();
  EXPECT_LT(max_abs(lhs - rhs), 1e-12);
}

TEST(InverseWeyl, RoundTripAndExamples) {
  Rng rng(13);
  for (int n : {3, 5, 31}) {
    const SpacePtr s = make_space(n);
    const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
    EXPECT_LT(max_abs(inverse_weyl(weyl_symbol(a)).entries() - a.entries()), 1e-10);
  }
  const int n = 9;
  const SpacePtr s = make_space(n);
  const Complex c(2.5, -0.5);
  EXPECT_LT(max_abs(inverse_weyl(WeylSymbol::constant(s, c)).entries() - c * ComplexMatrix::Identity(n, n)), 1e-12);
  ComplexMatrix qgrid(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) qgrid(p, q) = double(q);
  EXPECT_LT(max_abs(inverse_weyl(WeylSymbol(s, qgrid)).entries() - canonical_operators(s).position.entries()), 1e-12);
}

TEST(InverseWeyl, ExplicitPhasePointSum) {
  Rng rng(17);
  const int n = 5;
  const SpacePtr s = make_space(n);
  const WeylSymbol sym(s, random_gaussian_matrix(n, n, rng));
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) acc += sym(p, q) * phase_point_operator(s, p, q).entries();
  acc /= double(n);
  EXPECT_LT(max_abs(inverse_weyl(sym).entries() - acc), 1e-12);
}

TEST(Weyl, Traciality) {
  Rng rng(19);
  for (int n : {3, 5, 31}) {
    const SpacePtr s = make_space(n);
    for (int trial = 0; trial < 10; ++trial) {
      const OperatorMatrix a = random_hermitian(s, rng);
      const OperatorMatrix b = random_hermitian(s, rng);
      const Complex lhs = (a.entries() * b.entries()).trace();
      const Complex rhs = weyl_symbol(a).grid().cwiseProduct(weyl_symbol(b).grid()).sum() / double(n);
      EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST(Characteristic, MatchesTraceAgainstDisplacements) {
  Rng rng(23);
  for (int n : {3, 7, 15}) {
    const SpacePtr s = make_space(n);
    const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
    for (auto o : {Ordering::symmetric, Ordering::normal, Ordering::antinormal}) {
      const CharacteristicFn fast = characteristic_fn(a, o);
      ComplexMatrix ref(n, n);
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) ref(u, v) = (a.entries() * displacement_operator(s, {u, v, o}).entries()).trace();
      EXPECT_LT(max_abs(fast.grid() - ref), 1e-10 * n);
      EXPECT_LT(max_abs(characteristic_fn_direct(a, o).grid() - ref), 1e-10 * n);
      EXPECT_NEAR(std::abs(fast.grid()(0, 0) - a.trace()), 0.0, 1e-10);
    }
  }
}

TEST(Characteristic, OrderingPhaseRelation) {
  Rng rng(29);
  const int n = 9;
  const SpacePtr s = make_space(n);
  const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
  const CharacteristicFn w = characteristic_fn(a, Ordering::symmetric);
  const CharacteristicFn nn = characteristic_fn(a, Ordering::normal);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const Complex phase = std::polar(1.0, -2.0 * std::numbers::pi * 2.0 * u * v / n);
      EXPECT_NEAR(std::abs(nn.grid()(u, v) - phase * w.grid()(u, v)), 0.0, 1e-11);
    }
  EXPECT_LT(max_abs(nn.reordered(Ordering::symmetric).grid() - w.grid()), 1e-12);
  EXPECT_LT(max_abs(w.reordered(Ordering::antinormal).grid() - characteristic_fn(a, Ordering::antinormal).grid()), 1e-11);
}

TEST(Characteristic, IdentityIsDeltaAtOrigin) {
  const int n = 7;
  const SpacePtr s = make_space(n);
  const CharacteristicFn cf = characteristic_fn(OperatorMatrix::identity(s));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) EXPECT_NEAR(std::abs(cf.grid()(u, v) - (u == 0 && v == 0 ? double(n) : 0.0)), 0.0, 1e-12);
}

TEST(Characteristic, RoundTripAndRejectsOtherOrderings) {
  Rng rng(31);
  const int n = 15;
  const SpacePtr s = make_space(n);
  const WeylSymbol sym(s, random_gaussian_matrix(n, n, rng));
  const CharacteristicFn cf = characteristic_from_symbol(sym);
  EXPECT_LT(max_abs(symbol_from_characteristic(cf).grid() - sym.grid()), 1e-12 * n);
  EXPECT_THROW(symbol_from_characteristic(cf.reordered(Ordering::normal)), std::invalid_argument);
}

TEST(Characteristic, DeltaSymbolGivesPlaneWave) {
  const int n = 7;
  const SpacePtr s = make_space(n);
  const int p0 = 2, q0 = 5;
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  g(p0, q0) = double(n);
  const CharacteristicFn cf = characteristic_from_symbol(WeylSymbol(s, g));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const Complex expect = std::polar(1.0, -2.0 * std::numbers::pi * 2.0 * (p0 * v - q0 * u) / n);
      EXPECT_NEAR(std::abs(cf.grid()(u, v) - expect), 0.0, 1e-12);
    }
}

TEST(Characteristic, DensityNormalisationChain) {
  Rng rng(37);
  const int n = 9;
  const SpacePtr s = make_space(n);
  const OperatorMatrix rho = random_density(s, rng);
  const CharacteristicFn cf = characteristic_fn(rho);
  EXPECT_NEAR(std::abs(cf.grid()(0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(symbol_from_characteristic(cf).grid().sum() - double(n)), 0.0, 1e-10);
}

TEST(Pairings, CommutatorAndAnticommutatorSymbols) {
  Rng rng(41);
  const int n = 7;
  const SpacePtr s = make_space(n);
  const OperatorMatrix x = random_hermitian(s, rng);
  const OperatorMatrix y = random_hermitian(s, rng);
  const ComplexMatrix c = Complex(0.0, -1.0) * (x.entries() * y.entries() - y.entries() * x.entries());
  const ComplexMatrix a = 0.5 * (x.entries() * y.entries() + y.entries() * x.entries());
  EXPECT_LT(max_abs(commutator_symbol(weyl_symbol(x), weyl_symbol(y)).grid() - weyl_symbol(OperatorMatrix(s, c)).grid()), 1e-11);
  EXPECT_LT(max_abs(anticommutator_symbol(weyl_symbol(x), weyl_symbol(y)).grid() - weyl_symbol(OperatorMatrix(s, a)).grid()), 1e-11);
}
