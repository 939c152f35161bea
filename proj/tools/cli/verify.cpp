#include <algorithm>
#include <cmath>

#include "commands.hpp"
#include "phasespace/dynamics.hpp"
#include "phasespace/random.hpp"
#include "phasespace/thirdq.hpp"

namespace phasespace::cli {

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void structure_rows(const SpacePtr& s, Rng& rng, std::vector<VerifyRow>& rows) {
  const int n = s->dimension();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  rows.push_back({"overlap unitarity", n, max_abs(s->overlap() * s->overlap().adjoint() - id), 1e-10});

  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  std::vector<ComplexMatrix> delta;
  delta.reserve(static_cast<std::size_t>(n) * n);
  double trace_err = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      delta.push_back(phase_point_operator(s, p, q).entries());
      acc += delta.back();
      trace_err = std::max(trace_err, std::abs(delta.back().trace() - 1.0));
    }
  rows.push_back({"phase-point resolution of identity", n, max_abs(acc / double(n) - id), 1e-10});
  rows.push_back({"phase-point trace", n, trace_err, 1e-10});

  // Tr(D_a D_b) = N delta_ab; all pairs for small N, a sample otherwise.
  const std::size_t cells = delta.size();
  auto pair_error = [&](std::size_t a, std::size_t b) {
    const Complex t = (delta[a].cwiseProduct(delta[b].transpose())).sum();
    return std::abs(t - (a == b ? double(n) : 0.0));
  };
  double orth = 0.0;
  if (n <= 7) {
    for (std::size_t a = 0; a < cells; ++a)
      for (std::size_t b = 0; b < cells; ++b) orth = std::max(orth, pair_error(a, b));
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, cells - 1);
    for (int k = 0; k < 400; ++k) {
      const std::size_t a = pick(rng);
      orth = std::max({orth, pair_error(a, pick(rng)), pair_error(a, a)});
    }
  }
  rows.push_back({"phase-point orthogonality", n, orth, 1e-10 * n});

  const OperatorMatrix a(s, random_gaussian_matrix(n, n, rng));
  rows.push_back({"weyl round trip", n, max_abs(inverse_weyl(weyl_symbol(a)).entries() - a.entries()), 1e-10});
  rows.push_back({"fast weyl matches definition", n, max_abs(weyl_symbol(a).grid() - weyl_symbol_direct(a).grid()),
                  1e-10});

  double trac = 0.0, imag = 0.0;
  for (int k = 0; k < 20; ++k) {
    const OperatorMatrix x = random_hermitian(s, rng);
    const OperatorMatrix y = random_hermitian(s, rng);
    const WeylSymbol sx = weyl_symbol(x), sy = weyl_symbol(y);
    const Complex lhs = (x.entries() * y.entries()).trace();
    const Complex rhs = sx.grid().cwiseProduct(sy.grid()).sum() / double(n);
    trac = std::max(trac, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    imag = std::max(imag, sx.max_imag());
  }
  rows.push_back({"traciality", n, trac, 1e-10});
  rows.push_back({"hermitian symbol is real", n, imag, 1e-10});
}

void dynamics_rows(const SpacePtr& s, Rng& rng, std::vector<VerifyRow>& rows) {
  const int n = s->dimension();
  const OperatorMatrix h = random_hermitian(s, rng);
  const WeylSymbol hs = weyl_symbol(h);

  double kerr = 0.0;
  const FactorizedMoyalKernel kf(hs);
  const bool dense = n <= 31;
  const std::optional<MoyalKernel> kd = dense ? std::optional<MoyalKernel>(build_kernel(hs)) : std::nullopt;
  for (int k = 0; k < 5; ++k) {
    const WeylSymbol f(s, random_gaussian_matrix(n, n, rng));
    const ComplexMatrix ref = moyal_rhs(h, f).grid();
    kerr = std::max(kerr, max_abs(kf.apply(f).grid() - ref));
    if (kd) kerr = std::max(kerr, max_abs(kd->apply(f).grid() - ref));
  }
  rows.push_back({"kernel reproduces moyal bracket", n, kerr, 1e-10 * std::max(1.0, max_abs(hs.grid()))});

  const OperatorMatrix rho = random_density(s, rng);
  const HamiltonianSpec spec = HamiltonianSpec::from_matrix(h);
  PropagatorConfig cfg;
  cfg.dt = 1e-3;
  cfg.steps = 200;
  cfg.stride = 200;
  const ComplexMatrix exact = weyl_symbol(exact_evolution(rho, h, cfg.total_time())).grid();
  for (Engine e : {Engine::spectral_moyal, Engine::kernel_quadrature}) {
    cfg.engine = e;
    const std::vector<WeylSymbol> sym = evolve_symbols(rho, spec, cfg);
    rows.push_back({"engine " + std::string(to_string(e)) + " vs oracle", n, max_abs(sym.back().grid() - exact),
                    1e-6});
  }

  const QuasiDistribution w = wigner_of(rho);
  const Marginals m = marginals(w);
  double merr = 0.0;
  const ComplexMatrix rho_p = rho.in_basis(Basis::momentum).entries();
  for (int k = 0; k < n; ++k) {
    merr = std::max(merr, std::abs(m.position(k) - rho.entries()(k, k).real()));
    merr = std::max(merr, std::abs(m.momentum(k) - rho_p(k, k).real()));
  }
  rows.push_back({"wigner marginals", n, merr, 1e-10});

  const CoherentFrame frame(s, default_frame_width(n));
  double neg = 0.0;
  for (int k = 0; k < 10; ++k) {
    const QuasiDistribution hu = husimi_of(random_pure_state(s, rng), frame);
    neg = std::max(neg, -hu.real().minCoeff());
  }
  rows.push_back({"husimi nonnegative", n, std::max(0.0, neg), 1e-10});
}

void thirdq_rows(const SpacePtr& s, Rng& rng, std::vector<VerifyRow>& rows) {
  const int n = s->dimension();
  const OperatorMatrix h = random_hermitian(s, rng);
  CorrelationState corr(s, random_density(s, rng).entries(), Statistics::fermion);
  const double n0 = corr.particle_number();
  PropagatorConfig cfg;
  cfg.engine = Engine::spectral_moyal;
  cfg.dt = 2e-3;
  cfg.steps = 250;
  cfg.stride = 50;
  const std::vector<WeylSymbol> sym =
      evolve_symbols(OperatorMatrix(s, corr.matrix(), Basis::position, OperatorKind::hermitian),
                     HamiltonianSpec::from_matrix(h), cfg);
  double uni = max_abs(sym.front().grid() - klimontovich_average(corr).grid());
  double number = 0.0, occ = 0.0;
  for (std::size_t k = 1; k < sym.size(); ++k) {
    corr = ballistic_step_corr(corr, h, cfg.dt * cfg.stride);
    uni = std::max(uni, max_abs(sym[k].grid() - klimontovich_average(corr).grid()));
    number = std::max(number, std::abs(corr.particle_number() - n0));
    const Eigen::VectorXd o = corr.occupations();
    occ = std::max({occ, -o.minCoeff(), o.maxCoeff() - 1.0});
  }
  rows.push_back({"klimontovich unification", n, uni, 1e-6});
  rows.push_back({"particle number conserved", n, number, 1e-10});
  rows.push_back({"fermion occupations in [0,1]", n, std::max(0.0, occ), 1e-10});

  double one = 0.0;
  for (int k = 0; k < 10; ++k) {
    const OperatorMatrix a = random_hermitian(s, rng);
    const CorrelationState g(s, random_density(s, rng).entries(), Statistics::fermion);
    one = std::max(one, std::abs(assemble_one_body(a).expectation(g) - (a.entries() * g.matrix()).trace()));
  }
  rows.push_back({"one-body expectation identity", n, one, 1e-12 * n});

  // Constant symbols: f(t) = s a / g + (f0 - s a / g) exp(-g t).
  const double sv = 0.3, av = 0.8, gv = 1.0, f0 = 2.0;
  auto constant = [&](double v) { return WeylSymbol(s, ComplexMatrix::Constant(n, n, Complex(v))); };
  TransportInputs in;
  in.hamiltonian = {weyl_symbol(h)};
  in.injection = {constant(sv)};
  in.broadening = {constant(gv)};
  in.retarded_real = {constant(0.0)};
  in.spectral = {constant(av)};
  EnergyResolvedSymbols f{{0.0}, {constant(f0)}, 1.0};
  const double dt = 0.01;
  double closed = 0.0;
  for (int step = 1; step <= 500; ++step) {
    f = transport_step(f, in, dt);
    const double t = step * dt;
    const double expect = sv * av / gv + (f0 - sv * av / gv) * std::exp(-gv * t);
    closed = std::max(closed, max_abs(f.slices[0].grid() - ComplexMatrix::Constant(n, n, Complex(expect))));
  }
  rows.push_back({"transport closed form", n, closed, 1e-8});

  TransportInputs free;
  free.hamiltonian = {weyl_symbol(h)};
  free.injection = free.broadening = free.retarded_real = free.spectral = {constant(0.0)};
  EnergyResolvedSymbols g{{0.0, 1.0}, {WeylSymbol(s, wigner_of(random_density(s, rng)).grid()),
                                       WeylSymbol(s, wigner_of(random_density(s, rng)).grid())}};
  std::vector<Complex> sums;
  for (const auto& sl : g.slices) sums.push_back(sl.grid().sum());
  double cons = 0.0;
  for (int step = 0; step < 20; ++step) g = transport_step(g, free, 0.01);
  for (std::size_t e = 0; e < sums.size(); ++e) cons = std::max(cons, std::abs(g.slices[e].grid().sum() - sums[e]));
  rows.push_back({"transport conserves slice sums", n, cons, 1e-8});

  const WeylSymbol base(s, random_gaussian_matrix(n, n, rng));
  const EnergyResolvedSymbols lin{{0.0, 0.5, 1.0},
                                  {WeylSymbol(s, 0.0 * base.grid()), WeylSymbol(s, 0.5 * base.grid()), base}};
  rows.push_back({"energy trapezoid", n, max_abs(energy_integrate(lin).grid() - 0.5 * base.grid()), 1e-12});
}

}  // namespace

std::vector<VerifyRow> verify_suite(const std::vector<int>& sizes, std::uint64_t seed) {
  std::vector<VerifyRow> rows;
  for (int n : sizes) {
    const SpacePtr s = make_space(n);
    Rng rng(seed + static_cast<std::uint64_t>(n));
    structure_rows(s, rng, rows);
    dynamics_rows(s, rng, rows);
    thirdq_rows(s, rng, rows);
  }
  return rows;
}

}  // namespace phasespace::cli
