#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "phasespace/dynamics.hpp"
#include "phasespace/random.hpp"

using namespace phasespace;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Matrix exponential by scaling and squaring of a Taylor series; independent
// of the eigendecomposition the library uses.
ComplexMatrix expm(const ComplexMatrix& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const ComplexMatrix x = a / std::pow(2.0, squarings);
  ComplexMatrix term = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * x / double(k)).eval();
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = (sum * sum).eval();
  return sum;
}

ComplexMatrix oracle_symbol(const OperatorMatrix& rho, const OperatorMatrix& h, double t) {
  const ComplexMatrix u = expm(Complex(0.0, -t) * h.entries());
  return weyl_symbol(OperatorMatrix(rho.space(), u * rho.entries() * u.adjoint())).grid();
}

PropagatorConfig config(Engine e, double dt, int steps, int stride, Integrator i = Integrator::rk4) {
  PropagatorConfig c;
  c.engine = e;
  c.dt = dt;
  c.steps = steps;
  c.stride = stride;
  c.integrator = i;
  return c;
}

}  // namespace

TEST(Config, Validation) {
  EXPECT_THROW(config(Engine::oracle, 0.0, 10, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(Engine::oracle, 0.1, 0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(config(Engine::oracle, 0.1, 10, 3).validate(), std::invalid_argument);
  EXPECT_THROW(config(Engine::kernel_quadrature, 0.1, 10, 5, Integrator::split_step).validate(), std::invalid_argument);
  EXPECT_NO_THROW(config(Engine::spectral_moyal, 0.1, 10, 5).validate());
  EXPECT_DOUBLE_EQ(config(Engine::oracle, 0.25, 8, 4).total_time(), 2.0);
  EXPECT_EQ(engine_from_string("kernel_quadrature"), Engine::kernel_quadrature);
  EXPECT_THROW(engine_from_string("fast"), std::invalid_argument);
  EXPECT_EQ(integrator_from_string("split_step"), Integrator::split_step);
}

TEST(MoyalRhs, IdentityAndCommutingStatesGiveZero) {
  Rng rng(201);
  const int n = 9;
  const SpacePtr s = make_space(n);
  const OperatorMatrix h = random_hermitian(s, rng);
  const WeylSymbol flat = WeylSymbol::constant(s, 1.0 / n);
  EXPECT_LT(max_abs(moyal_rhs(h, flat).grid()), 1e-13);

  ComplexMatrix hd = ComplexMatrix::Zero(n, n), rd = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    hd(k, k) = 0.3 * k * k;
    rd(k, k) = 1.0 / n;
  }
  rd(0, 0) += 0.05;
  rd(1, 1) -= 0.05;
  EXPECT_LT(max_abs(moyal_rhs(OperatorMatrix(s, hd), weyl_symbol(OperatorMatrix(s, rd))).grid()), 1e-13);
}

TEST(MoyalRhs, RejectsNonHermitian) {
  Rng rng(203);
  const SpacePtr s = make_space(5);
  const OperatorMatrix a(s, random_gaussian_matrix(5, 5, rng));
  EXPECT_THROW(moyal_rhs(a, WeylSymbol::constant(s, 0.2)), std::invalid_argument);
}

TEST(MoyalRhs, MatchesFiniteDifferenceOfOracle) {
  const int n = 31;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::preset(s, HarmonicPreset{1.0, 0, 0});
  const OperatorMatrix rho = wavepacket_state(s, 3, 7, default_frame_width(n));
  const double eps = 1e-6;
  const ComplexMatrix fd = (oracle_symbol(rho, h.matrix_at(), eps) - weyl_symbol(rho).grid()) / eps;
  const ComplexMatrix rhs = moyal_rhs(h, weyl_symbol(rho)).grid();
  EXPECT_LT(max_abs(fd - rhs), 1e-4 * std::max(1.0, max_abs(rhs)));
}

namespace {

// exp(i (2 pi n q / N + 2 pi m p / N))
WeylSymbol plane_wave(const SpacePtr& s, int n, int m) {
  const int dim = s->dimension();
  ComplexMatrix g(dim, dim);
  for (int p = 0; p < dim; ++p)
    for (int q = 0; q < dim; ++q) g(p, q) = std::polar(1.0, 2.0 * std::numbers::pi * (n * q + m * p) / dim);
  return WeylSymbol(s, std::move(g));
}

}  // namespace

TEST(GradientExpansion, ConvergesToContinuumBracketOnPlaneWaves) {
  const int n = 31;
  const SpacePtr s = make_space(n);
  const WeylSymbol h = plane_wave(s, 1, 0);
  const WeylSymbol f = plane_wave(s, 0, 2);
  // Lambda between the two plane waves is -2 pi delta / N.
  const int delta = 1 * 2 - 0 * 0;
  const double lambda = -2.0 * std::numbers::pi * delta / n;
  const ComplexMatrix prod = h.grid().cwiseProduct(f.grid());
  const ComplexMatrix continuum = 2.0 * std::sin(lambda / 2.0) * prod;
  double prev = 1e300;
  for (int order : {1, 3, 5}) {
    const double err = max_abs(gradient_expansion_rhs(h, f, order).grid() - continuum);
    EXPECT_LT(err, prev);
    prev = err;
  }
  // First omitted term of 2 sin(x / 2): x^7 / (2^6 7!).
  EXPECT_LT(prev, 1.01 * std::pow(std::abs(lambda), 7) / (64.0 * 5040.0));
  EXPECT_GT(prev, 0.99 * std::pow(std::abs(lambda), 7) / (64.0 * 5040.0) - 1e-12);
  // Leading order is the Poisson bracket: dq h dk f - dk h dq f = lambda h f.
  EXPECT_LT(max_abs(gradient_expansion_rhs(h, f, 1).grid() - lambda * prod), 1e-10);
  EXPECT_THROW(gradient_expansion_rhs(h, f, 2), std::invalid_argument);
}

TEST(GradientExpansion, LatticeBracketCarriesHarmonicParity) {
  const int n = 31;
  const SpacePtr s = make_space(n);
  const std::array<std::array<int, 4>, 5> cases{{{1, 0, 0, 2}, {1, 0, 0, 1}, {2, 1, -1, 3}, {0, 1, 1, 0}, {3, -2, 1, 1}}};
  for (const auto& [nh, mh, nf, mf] : cases) {
    const WeylSymbol h = plane_wave(s, nh, mh);
    const WeylSymbol f = plane_wave(s, nf, mf);
    const int delta = nh * mf - mh * nf;
    const double sign = (delta % 2 == 0) ? 1.0 : -1.0;
    const ComplexMatrix continuum =
        -2.0 * std::sin(std::numbers::pi * delta / n) * h.grid().cwiseProduct(f.grid());
    EXPECT_LT(max_abs(commutator_symbol(h, f).grid() - sign * continuum), 1e-10)
        << "harmonics " << nh << ' ' << mh << ' ' << nf << ' ' << mf;
  }
}

TEST(GradientExpansion, PoissonBracketTracksWavepacketMainLobe) {
  const int n = 63;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec hs = HamiltonianSpec::preset(s, HarmonicPreset{1.0, 0, 0});
  const WeylSymbol h = weyl_symbol(hs.matrix_at(0.0));
  const QuasiDistribution w = wigner_of(wavepacket_state(s, 0, 3, default_frame_width(n)));
  const WeylSymbol f(s, w.grid());
  const ComplexMatrix exact = moyal_rhs(hs.matrix_at(0.0), f).grid();
  const ComplexMatrix approx = gradient_expansion_rhs(h, f, 3).grid();
  double err = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (std::abs(s->centred(p)) < 8 && std::abs(s->centred(q) - 3) < 8)
        err = std::max(err, std::abs(approx(p, q) - exact(p, q)));
  EXPECT_LT(err, 0.1 * max_abs(exact));
}

TEST(Kernel, ReproducesMoyalRhs) {
  Rng rng(211);
  for (int n : {3, 5, 7}) {
    const SpacePtr s = make_space(n);
    const OperatorMatrix h = random_hermitian(s, rng);
    const MoyalKernel k = build_kernel(weyl_symbol(h));
    const FactorizedMoyalKernel kf(weyl_symbol(h));
    for (int trial = 0; trial < 20; ++trial) {
      const WeylSymbol f(s, random_gaussian_matrix(n, n, rng));
      const ComplexMatrix ref = moyal_rhs(h, f).grid();
      EXPECT_LT(max_abs(k.apply(f).grid() - ref), 1e-10);
      EXPECT_LT(max_abs(kf.apply(f).grid() - ref), 1e-10);
    }
  }
}

TEST(Kernel, EntriesMatchShiftedDifferenceFormula) {
  Rng rng(213);
  const int n = 5;
  const SpacePtr s = make_space(n);
  const WeylSymbol h = weyl_symbol(random_hermitian(s, rng));
  const MoyalKernel k = build_kernel(h);
  const FactorizedMoyalKernel kf(h);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int pp = 0; pp < n; ++pp)
        for (int qp = 0; qp < n; ++qp) {
          Complex acc = 0.0;
          for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
              const double phase = 2.0 * std::numbers::pi * ((p - pp) * v + (q - qp) * u) / n;
              const Complex diff = h(s->wrap(p + s->half(u)), s->wrap(q - s->half(v))) -
                                   h(s->wrap(p - s->half(u)), s->wrap(q + s->half(v)));
              acc += std::polar(1.0, phase) * diff;
            }
          acc *= Complex(0.0, -1.0 / (n * n));
          EXPECT_NEAR(acc.imag(), 0.0, 1e-12);
          EXPECT_NEAR(k(p, q, pp, qp), acc.real(), 1e-12);
          EXPECT_NEAR(std::abs(kf(p, q, pp, qp) - acc), 0.0, 1e-12);
        }
}

TEST(Kernel, StructuralProperties) {
  Rng rng(217);
  const int n = 7;
  const SpacePtr s = make_space(n);
  const OperatorMatrix hm = random_hermitian(s, rng);
  const WeylSymbol h = weyl_symbol(hm);
  const MoyalKernel k = build_kernel(h);
  // Antisymmetry of a real commutator kernel.
  EXPECT_LT((k.dense() + k.dense().transpose()).cwiseAbs().maxCoeff(), 1e-12);
  // [H, H] = 0.
  EXPECT_LT(max_abs(k.apply(h).grid()), 1e-10);
  // Trace conservation.
  for (int trial = 0; trial < 5; ++trial) {
    const WeylSymbol f(s, random_gaussian_matrix(n, n, rng));
    EXPECT_LT(std::abs(k.apply(f).grid().sum()), 1e-10);
  }
  // Identity-proportional Hamiltonian.
  const MoyalKernel zero = build_kernel(WeylSymbol::constant(s, 2.5));
  EXPECT_LT(zero.dense().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Evolve, ZeroHamiltonianIsStatic) {
  Rng rng(221);
  const int n = 7;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(OperatorMatrix::zero(s));
  const OperatorMatrix rho = random_density(s, rng);
  for (Engine e : {Engine::oracle, Engine::spectral_moyal, Engine::kernel_quadrature}) {
    const Trajectory t = evolve(rho, h, config(e, 0.01, 20, 10));
    ASSERT_EQ(t.snapshots.size(), 3u);
    for (const auto& snap : t.snapshots) EXPECT_LT(max_abs(snap.distribution.grid() - wigner_of(rho).grid()), 1e-14);
  }
}

TEST(Evolve, EnginesAgreeWithIndependentOracle) {
  Rng rng(223);
  const int n = 15;
  const SpacePtr s = make_space(n);
  const OperatorMatrix hm = random_hermitian(s, rng);
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(hm);
  const OperatorMatrix rho = random_density(s, rng);
  const ComplexMatrix ref = oracle_symbol(rho, hm, 0.5);
  for (Engine e : {Engine::oracle, Engine::spectral_moyal, Engine::kernel_quadrature}) {
    const Trajectory t = evolve(rho, h, config(e, 1e-3, 500, 100));
    ASSERT_EQ(t.snapshots.size(), 6u);
    EXPECT_LT(max_abs(t.snapshots.back().distribution.grid() - ref), 1e-6) << to_string(e);
    for (const auto& snap : t.snapshots) {
      EXPECT_NEAR(snap.trace, 1.0, 1e-8);
      EXPECT_NEAR(snap.purity, t.snapshots.front().purity, 1e-6);
      EXPECT_NEAR(snap.energy, t.snapshots.front().energy, 1e-6);
      EXPECT_LT(snap.max_imag, 1e-8);
    }
  }
}

TEST(Evolve, ConservationOverThousandSteps) {
  Rng rng(227);
  const int n = 9;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(random_hermitian(s, rng));
  const OperatorMatrix rho = random_density(s, rng);
  for (Engine e : {Engine::spectral_moyal, Engine::kernel_quadrature}) {
    const Trajectory t = evolve(rho, h, config(e, 1e-3, 1000, 100));
    for (const auto& snap : t.snapshots) {
      EXPECT_NEAR(snap.trace, 1.0, 1e-8);
      EXPECT_NEAR(snap.purity, t.snapshots.front().purity, 1e-6);
      EXPECT_NEAR(snap.energy, t.snapshots.front().energy, 1e-6);
    }
  }
}

TEST(Evolve, LargeStepWarningRecorded) {
  Rng rng(229);
  const SpacePtr s = make_space(5);
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(random_hermitian(s, rng));
  const OperatorMatrix rho = random_density(s, rng);
  const Trajectory t = evolve(rho, h, config(Engine::spectral_moyal, 0.2, 2, 1));
  ASSERT_FALSE(t.warnings.empty());
  EXPECT_NE(t.warnings.front().find("|H| dt"), std::string::npos);
  EXPECT_TRUE(evolve(rho, h, config(Engine::spectral_moyal, 1e-3, 2, 1)).warnings.empty());
}

TEST(Evolve, NonFiniteStateReportsStep) {
  const SpacePtr s = make_space(5);
  ComplexMatrix hm = ComplexMatrix::Zero(5, 5);
  for (int k = 0; k < 5; ++k) hm(k, k) = 1e200 * k;
  hm(0, 1) = hm(1, 0) = 1e200;
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(OperatorMatrix(s, hm));
  const OperatorMatrix rho = wavepacket_state(s, 1, 1, 1.0);
  try {
    evolve(rho, h, config(Engine::spectral_moyal, 1.0, 50, 1));
    FAIL() << "no error raised";
  } catch (const PropagationError& e) {
    EXPECT_GE(e.step(), 1);
    EXPECT_NE(std::string(e.what()).find(std::to_string(e.step())), std::string::npos);
  }
}

TEST(Evolve, RequiresDensity) {
  const SpacePtr s = make_space(5);
  const HamiltonianSpec h = HamiltonianSpec::from_matrix(OperatorMatrix::zero(s));
  EXPECT_THROW(evolve(OperatorMatrix::identity(s), h, config(Engine::oracle, 0.1, 1, 1)), std::invalid_argument);
}

TEST(Evolve, SplitStepForSeparableHamiltonian) {
  const int n = 31;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::preset(s, HarmonicPreset{1.0, 0, 0});
  const OperatorMatrix rho = wavepacket_state(s, 2, 4, default_frame_width(n));
  const ComplexMatrix ref = oracle_symbol(rho, h.matrix_at(), 0.5);
  const Trajectory t = evolve(rho, h, config(Engine::spectral_moyal, 1e-3, 500, 500, Integrator::split_step));
  EXPECT_LT(max_abs(t.snapshots.back().distribution.grid() - ref), 1e-5);
  Rng rng(231);
  const HamiltonianSpec dense = HamiltonianSpec::from_matrix(random_hermitian(s, rng));
  EXPECT_THROW(evolve(rho, dense, config(Engine::spectral_moyal, 1e-3, 10, 10, Integrator::split_step)),
               std::invalid_argument);
}

TEST(Evolve, TimeDependentKickedRotorMatchesPiecewiseOracle) {
  const int n = 15;
  const SpacePtr s = make_space(n);
  const KickedRotorPreset kr{0.8, 1.0, 0.2};
  const HamiltonianSpec h = HamiltonianSpec::preset(s, kr);
  ASSERT_TRUE(h.time_dependent());
  const OperatorMatrix rho = wavepacket_state(s, 0, 3, default_frame_width(n));
  const double dt = 2e-3;
  const int steps = 400;
  // Independent piecewise propagation with midpoint samples.
  ComplexMatrix r = rho.entries();
  for (int k = 0; k < steps; ++k) {
    const ComplexMatrix u = expm(Complex(0.0, -dt) * h.matrix_at((k + 0.5) * dt).entries());
    r = u * r * u.adjoint();
  }
  const ComplexMatrix ref = weyl_symbol(OperatorMatrix(s, r)).grid();
  for (Engine e : {Engine::oracle, Engine::spectral_moyal, Engine::kernel_quadrature}) {
    const Trajectory t = evolve(rho, h, config(e, dt, steps, steps));
    EXPECT_LT(max_abs(t.snapshots.back().distribution.grid() - ref), 1e-6) << to_string(e);
  }
}

TEST(Hamiltonian, PresetsAreHermitianWithExactSymbols) {
  const int n = 11;
  const SpacePtr s = make_space(n);
  for (const HamiltonianSpec::Preset& p :
       std::vector<HamiltonianSpec::Preset>{HarmonicPreset{0.7, 2, 5}, TightBindingPreset{1.3, -0.4},
                                            KickedRotorPreset{1.5, 1.0, 0.25}}) {
    const HamiltonianSpec h = HamiltonianSpec::preset(s, p);
    for (double t : {0.0, 0.05, 0.5}) {
      const OperatorMatrix m = h.matrix_at(t);
      EXPECT_TRUE(is_hermitian(m.entries(), 1e-12));
      EXPECT_LT(max_abs(weyl_symbol(m).grid() - h.symbol_at(t).grid()), 1e-10);
    }
  }
}

TEST(Hamiltonian, TightBindingIsNearestNeighbourHopping) {
  const int n = 7;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::preset(s, TightBindingPreset{0.9, 0.25});
  const ComplexMatrix m = h.matrix_at().entries();
  ComplexMatrix ref = 0.25 * ComplexMatrix::Identity(n, n);
  for (int q = 0; q < n; ++q) {
    ref((q + 1) % n, q) -= 0.9;
    ref(q, (q + 1) % n) -= 0.9;
  }
  EXPECT_LT(max_abs(m - ref), 1e-12);
}

TEST(Hamiltonian, MatrixAndSymbolFormsInterconvert) {
  Rng rng(233);
  const SpacePtr s = make_space(9);
  const OperatorMatrix hm = random_hermitian(s, rng);
  const HamiltonianSpec from_sym = HamiltonianSpec::from_symbol(weyl_symbol(hm));
  EXPECT_LT(max_abs(from_sym.matrix_at().entries() - hm.entries()), 1e-12);
  EXPECT_THROW(HamiltonianSpec::from_symbol(WeylSymbol(s, ComplexMatrix::Constant(9, 9, Complex(0, 1)))),
               std::invalid_argument);
}

TEST(Hamiltonian, KickPulseHasUnitArea) {
  const KickedRotorPreset k{1.0, 2.0, 0.3};
  double area = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) area += kick_pulse(k, -1.0 + 2.0 * (i + 0.5) / m) * (2.0 / m);
  EXPECT_NEAR(area, 1.0, 1e-8);
  EXPECT_THROW(kick_pulse(KickedRotorPreset{1.0, 1.0, 2.0}, 0.0), std::invalid_argument);
}

TEST(Harmonic, SmallOrbitClosesAfterOnePeriod) {
  const int n = 63;
  const SpacePtr s = make_space(n);
  const double omega = 1.0;
  const HamiltonianSpec h = HamiltonianSpec::preset(s, HarmonicPreset{omega, 0, 0});
  const OperatorMatrix rho = wavepacket_state(s, 0, 2, default_frame_width(n));
  const int steps = 1000;
  const double dt = 2.0 * std::numbers::pi / omega / steps;
  const Trajectory t = evolve(rho, h, config(Engine::oracle, dt, steps, 250));
  auto centroid = [&](const QuasiDistribution& d) {
    const Marginals m = marginals(d);
    double q = 0.0, p = 0.0;
    for (int k = 0; k < n; ++k) {
      q += s->centred(k) * m.position(k);
      p += s->centred(k) * m.momentum(k);
    }
    return std::pair{p, q};
  };
  const auto [p0, q0] = centroid(t.snapshots.front().distribution);
  const auto [p1, q1] = centroid(t.snapshots.back().distribution);
  EXPECT_LT(std::hypot(p1 - p0, q1 - q0), 1.0);
  // Quarter period: position displacement has rotated into momentum.
  const auto [pq, qq] = centroid(t.snapshots[1].distribution);
  EXPECT_LT(std::abs(qq), 1.0);
  EXPECT_GT(std::abs(pq), 1.5);
}
