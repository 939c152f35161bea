// Acceptance run: one PASS/FAIL line per criterion, with measured error,
// limit and wall time. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fock.hpp"
#include "phasespace/bench.hpp"
#include "phasespace/dynamics.hpp"
#include "phasespace/random.hpp"
#include "phasespace/thirdq.hpp"

using namespace phasespace;

namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// err <= limit, appended to the detail line.
bool check(Outcome& o, const std::string& what, double err, double limit) {
  const bool pass = err <= limit;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + " " + fmt("%.3g", err) + (pass ? " <= " : " > ") + fmt("%.1g", limit);
  o.ok = o.ok && pass;
  return pass;
}

std::pair<double, double> centroid(const QuasiDistribution& d) {
  const Marginals m = marginals(d);
  double p = 0.0, q = 0.0;
  for (int k = 0; k < d.dimension(); ++k) {
    p += d.space()->centred(k) * m.momentum(k);
    q += d.space()->centred(k) * m.position(k);
  }
  return {p, q};
}

Outcome structure_identities() {
  Outcome o;
  Rng rng(1001);
  double completeness = 0.0, mixed = 0.0, trace = 0.0, orth = 0.0, round = 0.0;
  for (int n : {3, 5, 31}) {
    const SpacePtr s = make_space(n);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    // sum_p |p><p| and sum_q |q><q| in the position basis.
    ComplexMatrix sum_p = ComplexMatrix::Zero(n, n);
    for (int p = 0; p < n; ++p) {
      ComplexVector ket(n);
      for (int r = 0; r < n; ++r) ket(r) = std::polar(1.0 / std::sqrt(double(n)), 2.0 * std::numbers::pi * p * r / n);
      sum_p += ket * ket.adjoint();
    }
    completeness = std::max(completeness, max_abs(sum_p - id));
    completeness = std::max(completeness, max_abs(s->overlap().adjoint() * s->overlap() - id));
    // (1/sqrt N) sum_{q,p} exp(2 pi i p q / N) |q><p|, expanded in the position basis.
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (int q = 0; q < n; ++q)
      for (int p = 0; p < n; ++p)
        for (int r = 0; r < n; ++r)
          acc(q, r) += std::polar(1.0, 2.0 * std::numbers::pi * p * (q - r) / n) / double(n);
    mixed = std::max(mixed, max_abs(acc - id));

    // Gram matrix of the phase-point operators: Tr(D_a D_b) = N delta_ab.
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    ComplexMatrix columns(n2, n2);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const ComplexMatrix d = phase_point_operator(s, p, q).entries();
        trace = std::max(trace, std::abs(d.trace() - 1.0));
        columns.col(p * n + q) = Eigen::Map<const ComplexVector>(d.data(), n2);
      }
    const ComplexMatrix gram = columns.adjoint() * columns;  // Tr(D_a^dagger D_b) = Tr(D_a D_b)
    orth = std::max(orth, max_abs(gram - double(n) * ComplexMatrix::Identity(n2, n2)));

    for (int k = 0; k < 5; ++k) {
      const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
      round = std::max(round, max_abs(inverse_weyl(weyl_symbol(a)).entries() - a.entries()));
    }
  }
  check(o, "completeness", completeness, 1e-10);
  check(o, "mixed completeness", mixed, 1e-10);
  check(o, "phase-point trace", trace, 1e-10);
  check(o, "orthogonality", orth, 1e-10);
  check(o, "round trip", round, 1e-10);
  return o;
}

Outcome traciality() {
  Outcome o;
  Rng rng(1002);
  const SpacePtr s = make_space(31);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const OperatorMatrix a = random_hermitian(s, rng);
    const OperatorMatrix b = random_hermitian(s, rng);
    const Complex lhs = (a.entries() * b.entries()).trace();
    const Complex rhs = weyl_symbol(a).grid().cwiseProduct(weyl_symbol(b).grid()).sum() / 31.0;
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  check(o, "relative error (100 pairs, N=31)", worst, 1e-10);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  Rng rng(1003);
  const SpacePtr s = make_space(31);
  const OperatorMatrix h = random_hermitian(s, rng);
  const OperatorMatrix rho = random_density(s, rng);
  PropagatorConfig cfg;
  cfg.dt = 1e-3;
  cfg.steps = 1000;
  cfg.stride = 1000;
  const ComplexMatrix exact = weyl_symbol(exact_evolution(rho, h, 1.0)).grid();
  for (Engine e : {Engine::spectral_moyal, Engine::kernel_quadrature}) {
    cfg.engine = e;
    const std::vector<WeylSymbol> sym = evolve_symbols(rho, HamiltonianSpec::from_matrix(h), cfg);
    check(o, std::string(to_string(e)), max_abs(sym.back().grid() - exact), 1e-6);
  }
  return o;
}

Outcome kernel_commutator() {
  Outcome o;
  Rng rng(1004);
  const SpacePtr s = make_space(5);
  const OperatorMatrix h = random_hermitian(s, rng);
  const MoyalKernel k = build_kernel(weyl_symbol(h));
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const WeylSymbol f(s, random_gaussian_matrix(5, 5, rng));
    worst = std::max(worst, max_abs(k.apply(f).grid() - moyal_rhs(h, f).grid()));
  }
  check(o, "dense kernel vs bracket (20 symbols)", worst, 1e-10);
  return o;
}

Outcome harmonic_orbit() {
  Outcome o;
  const int n = 127;
  const SpacePtr s = make_space(n);
  const HamiltonianSpec h = HamiltonianSpec::preset(s, HarmonicPreset{1.0, 0, 0});
  const OperatorMatrix rho = wavepacket_state(s, 0, 4, default_frame_width(n));
  PropagatorConfig cfg;
  cfg.engine = Engine::spectral_moyal;
  cfg.steps = 4000;
  cfg.stride = 1000;
  cfg.dt = 2.0 * std::numbers::pi / cfg.steps;
  const Trajectory t = evolve(rho, h, cfg);
  const Snapshot& a = t.snapshots.front();
  const Snapshot& b = t.snapshots.back();
  const auto [p0, q0] = centroid(a.distribution);
  const auto [p1, q1] = centroid(b.distribution);
  check(o, "centroid closure (cells)", std::hypot(p1 - p0, q1 - q0), 1.0);
  check(o, "trace drift", std::abs(b.trace - a.trace), 1e-8);
  check(o, "purity drift", std::abs(b.purity - a.purity), 1e-6);
  // Reference orbit from the exact propagator.
  const QuasiDistribution ref = wigner_of(exact_evolution(rho, h.matrix_at(), cfg.total_time()).with_kind(OperatorKind::density));
  const auto [pr, qr] = centroid(ref);
  check(o, "distance to oracle orbit", std::hypot(p1 - pr, q1 - qr), 1e-6);
  return o;
}

Outcome husimi_positivity() {
  Outcome o;
  Rng rng(1006);
  double most_negative = 0.0;
  for (int n : {15, 31}) {
    const SpacePtr s = make_space(n);
    const CoherentFrame frame(s, default_frame_width(n));
    for (int k = 0; k < 100; ++k) {
      const OperatorMatrix rho = k % 2 == 0 ? random_pure_state(s, rng) : random_density(s, rng);
      most_negative = std::min(most_negative, husimi_of(rho, frame).real().minCoeff());
    }
  }
  check(o, "-min Q (200 states)", std::max(0.0, -most_negative), 1e-10);
  return o;
}

Outcome unification() {
  Outcome o;
  Rng rng(1007);
  const int n = 15;
  const SpacePtr s = make_space(n);
  const OperatorMatrix h = random_hermitian(s, rng);
  CorrelationState corr(s, random_density(s, rng).entries(), Statistics::fermion);
  PropagatorConfig cfg;
  cfg.engine = Engine::spectral_moyal;
  cfg.dt = 1e-3;
  cfg.steps = 1000;
  cfg.stride = 100;
  const OperatorMatrix initial =
      inverse_weyl(WeylSymbol(s, klimontovich_average(corr).grid()), OperatorKind::hermitian);
  const std::vector<WeylSymbol> sym = evolve_symbols(initial, HamiltonianSpec::from_matrix(h), cfg);
  double worst = 0.0;
  for (std::size_t k = 1; k < sym.size(); ++k) {
    corr = ballistic_step_corr(corr, h, cfg.dt * cfg.stride);
    worst = std::max(worst, max_abs(sym[k].grid() - klimontovich_average(corr).grid()));
  }
  o.detail = std::to_string(sym.size() - 1) + " snapshots";
  check(o, "max error", worst, 1e-6);
  return o;
}

Outcome transport_closed_form() {
  Outcome o;
  Rng rng(1008);
  const int n = 7;
  const SpacePtr s = make_space(n);
  const double sv = 0.4, av = 0.7, gamma = 2.0, f0 = 1.5;
  auto constant = [&](double v) { return WeylSymbol::constant(s, v); };
  TransportInputs in{{weyl_symbol(random_hermitian(s, rng))}, {constant(sv)}, {constant(gamma)}, {constant(0.3)},
                     {constant(av)}};
  EnergyResolvedSymbols f{{0.0}, {constant(f0)}};
  const double dt = 0.005;
  const int steps = static_cast<int>(std::lround(5.0 / gamma / dt));
  double worst = 0.0;
  for (int k = 1; k <= steps; ++k) {
    f = transport_step(f, in, dt);
    const double fe = sv * av / gamma + (f0 - sv * av / gamma) * std::exp(-gamma * k * dt);
    worst = std::max(worst, (f.slices[0].grid().array() - fe).abs().maxCoeff());
  }
  check(o, "max error over gamma t in [0, 5]", worst, 1e-8);
  return o;
}

FourIndexTable random_pair_table(int m, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(m * m * m * m, 1, rng);
  FourIndexTable t(m);
  int idx = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) t(i, j, k, l) = g(idx++, 0);
  FourIndexTable sym(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) sym(i, j, k, l) = 0.5 * (t(i, j, k, l) + std::conj(t(l, k, j, i)));
  return sym;
}

Outcome wick_vs_fock() {
  Outcome o;
  Rng rng(1009);
  const int m = 3;
  const SpacePtr s = make_space(m);
  const fock_oracle::FermionFock fock(m);
  double contact_err = 0.0, pair_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_gaussian_matrix(m, m, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a + a.adjoint()));
    const Eigen::VectorXcd psi = fock.slater(es.eigenvectors().leftCols(2));
    const CorrelationState corr(s, fock.correlation(psi), Statistics::fermion);
    const FourIndexTable contact = contact_interaction(m, 1.3);
    contact_err = std::max(contact_err, std::abs(assemble_two_body(contact).wick_expectation(corr) -
                                                 fock.two_body(psi, contact)));
    const FourIndexTable pair = random_pair_table(m, rng);
    pair_err = std::max(pair_err, std::abs(assemble_two_body(pair).wick_expectation(corr) - fock.two_body(psi, pair)));
  }
  check(o, "contact", contact_err, 1e-10);
  check(o, "general pair table", pair_err, 1e-10);
  return o;
}

Outcome bench_sanity() {
  Outcome o;
  // Every size here keeps the dense kernel well beyond the last cache
  // level, so the fit sees a single memory regime.
  BenchConfig scaling;
  scaling.sizes = {69, 75, 81, 87, 93};
  scaling.engines = {"kernel_dense"};
  scaling.min_seconds = 0.5;
  scaling.seed = 1010;
  const BenchReport r = benchmark_engines(scaling);
  const double slope = r.exponents.at("kernel_dense");
  o.detail = "dense exponent " + fmt("%.3f", slope) + " in [3.5, 4.5]";
  o.ok = slope >= 3.5 && slope <= 4.5;

  BenchConfig cross;
  cross.sizes = {63};
  cross.engines = {"spectral_moyal", "kernel_dense"};
  cross.seed = 1010;
  const BenchReport c = benchmark_engines(cross);
  const double spectral = c.rows[0].seconds_per_step, dense = c.rows[1].seconds_per_step;
  o.detail += "; N=63 spectral " + fmt("%.3g", spectral) + " s vs dense " + fmt("%.3g", dense) + " s";
  o.ok = o.ok && spectral < dense;
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "structure identities (N = 3, 5, 31)", 5, structure_identities},
      {2, "traciality", 10, traciality},
      {3, "propagator oracle equivalence", 60, oracle_equivalence},
      {4, "kernel defines commutator", 5, kernel_commutator},
      {5, "harmonic orbit closure (N = 127)", 120, harmonic_orbit},
      {6, "husimi positivity", 30, husimi_positivity},
      {7, "unification cross-check", 30, unification},
      {8, "dissipative closed form", 5, transport_closed_form},
      {9, "two-body wick vs fock oracle", 5, wick_vs_fock},
      {10, "benchmark sanity", 300, bench_sanity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit;
    const bool ok = o.ok && in_time;
    failed += ok ? 0 : 1;
    std::printf("%s [%2d] %s: %s; %.2f s (limit %.0f s)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
