#include "phasespace/dynamics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "fft.hpp"

namespace phasespace {

using detail::DftSign;
using detail::dft_blocks;

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::oracle:
      return "oracle";
    case Engine::spectral_moyal:
      return "spectral_moyal";
    case Engine::kernel_quadrature:
      return "kernel_quadrature";
  }
  return "unknown";
}

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::rk4 ? "rk4" : "split_step";
}

Engine engine_from_string(std::string_view name) {
  for (auto e : {Engine::oracle, Engine::spectral_moyal, Engine::kernel_quadrature})
    if (to_string(e) == name) return e;
  throw std::invalid_argument("unknown engine '" + std::string(name) +
                              "' (expected oracle, spectral_moyal or kernel_quadrature)");
}

Integrator integrator_from_string(std::string_view name) {
  for (auto i : {Integrator::rk4, Integrator::split_step})
    if (to_string(i) == name) return i;
  throw std::invalid_argument("unknown integrator '" + std::string(name) + "' (expected rk4 or split_step)");
}

void PropagatorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (steps <= 0) throw std::invalid_argument("steps must be positive");
  if (stride <= 0) throw std::invalid_argument("stride must be positive");
  if (steps % stride != 0) {
    throw std::invalid_argument("stride " + std::to_string(stride) + " does not divide steps " + std::to_string(steps));
  }
  if (engine == Engine::kernel_quadrature && integrator == Integrator::split_step) {
    throw std::invalid_argument("split_step integrates operators; use it with the spectral_moyal engine");
  }
}

WeylSymbol moyal_rhs(const OperatorMatrix& h, const WeylSymbol& f) {
  require_same_space(*h.space(), *f.space(), "moyal_rhs");
  if (!is_hermitian(h.entries())) throw std::invalid_argument("moyal_rhs: Hamiltonian must be Hermitian");
  const ComplexMatrix hm = h.in_basis(Basis::position).entries();
  const ComplexMatrix rho = inverse_weyl(f).entries();
  ComplexMatrix c = hm * rho;
  c.noalias() -= rho * hm;
  c *= Complex(0.0, -1.0);
  return weyl_symbol(OperatorMatrix(h.space(), std::move(c)));
}

WeylSymbol moyal_rhs(const HamiltonianSpec& h, const WeylSymbol& f, double t) {
  return moyal_rhs(h.matrix_at(t), f);
}

namespace {

// Spectral partial derivative d^nq/dq^nq d^nk/dk^nk with k = 2 pi p / N.
ComplexMatrix spectral_derivative(const DualBasisSpace& s, const ComplexMatrix& grid, int nq, int nk) {
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  // grid(p, q) column-major: column q contiguous in p.
  std::vector<Complex> buf(grid.data(), grid.data() + nn * nn);
  dft_blocks(buf.data(), n, n, DftSign::forward);  // over p
  std::vector<Complex> t(nn * nn);
  for (std::size_t q = 0; q < nn; ++q)
    for (std::size_t a = 0; a < nn; ++a) t[a * nn + q] = buf[q * nn + a];
  dft_blocks(t.data(), n, n, DftSign::forward);  // over q
  const double two_pi = 2.0 * std::numbers::pi;
  for (int a = 0; a < n; ++a) {
    // d/dk = (N / 2 pi) d/dp -> multiply by i * centred(a).
    const Complex fk = std::pow(Complex(0.0, s.centred(a)), nk);
    for (int b = 0; b < n; ++b) {
      const Complex fq = std::pow(Complex(0.0, two_pi * s.centred(b) / n), nq);
      t[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)] *= fk * fq;
    }
  }
  dft_blocks(t.data(), n, n, DftSign::backward);
  for (std::size_t q = 0; q < nn; ++q)
    for (std::size_t a = 0; a < nn; ++a) buf[q * nn + a] = t[a * nn + q];
  dft_blocks(buf.data(), n, n, DftSign::backward);
  ComplexMatrix out(n, n);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (std::size_t q = 0; q < nn; ++q)
    for (std::size_t p = 0; p < nn; ++p)
      out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = scale * buf[q * nn + p];
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

WeylSymbol gradient_expansion_rhs(const WeylSymbol& h, const WeylSymbol& f, int order) {
  require_same_space(*h.space(), *f.space(), "gradient_expansion_rhs");
  if (order != 1 && order != 3 && order != 5) throw std::invalid_argument("gradient expansion order must be 1, 3 or 5");
  const DualBasisSpace& s = *h.space();
  // 2 sin(Lambda / 2) = Lambda - Lambda^3 / 24 + Lambda^5 / 1920, with
  // H Lambda^n f = sum_j C(n, j) (-1)^j (dq^{n-j} dk^j H)(dk^{n-j} dq^j f).
  const double coefficient[] = {1.0, -1.0 / 24.0, 1.0 / 1920.0};
  const int n = s.dimension();
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int term = 0; 2 * term + 1 <= order; ++term) {
    const int power = 2 * term + 1;
    for (int j = 0; j <= power; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const ComplexMatrix dh = spectral_derivative(s, h.grid(), power - j, j);
      const ComplexMatrix df = spectral_derivative(s, f.grid(), j, power - j);
      acc += (coefficient[term] * sign * binomial(power, j)) * dh.cwiseProduct(df);
    }
  }
  return WeylSymbol(h.space(), std::move(acc));
}

MoyalKernel::MoyalKernel(SpacePtr space, RealMatrix dense) : space_(std::move(space)), dense_(std::move(dense)) {
  const Eigen::Index n2 = static_cast<Eigen::Index>(space_->dimension()) * space_->dimension();
  if (dense_.rows() != n2 || dense_.cols() != n2) throw std::invalid_argument("kernel must be N^2 x N^2");
}

double MoyalKernel::operator()(int p, int q, int pp, int qp) const {
  const int n = space_->dimension();
  return dense_(p * n + q, pp * n + qp);
}

WeylSymbol MoyalKernel::apply(const WeylSymbol& f) const {
  require_same_space(*space_, *f.space(), "MoyalKernel::apply");
  const int n = space_->dimension();
  // Flatten with index p * N + q, i.e. row-major over (p, q). One streaming
  // pass over the columns of the kernel, updating real and imaginary parts.
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  Eigen::VectorXd re = Eigen::VectorXd::Zero(n2), im = Eigen::VectorXd::Zero(n2);
  for (int pp = 0; pp < n; ++pp)
    for (int qp = 0; qp < n; ++qp) {
      const Eigen::Index j = static_cast<Eigen::Index>(pp) * n + qp;
      const Complex x = f.grid()(pp, qp);
      re.noalias() += x.real() * dense_.col(j);
      im.noalias() += x.imag() * dense_.col(j);
    }
  ComplexMatrix grid(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) grid(p, q) = Complex(re(p * n + q), im(p * n + q));
  return WeylSymbol(space_, std::move(grid));
}

MoyalKernel build_kernel(const WeylSymbol& h) {
  const DualBasisSpace& s = *h.space();
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
  RealMatrix dense(n2, n2);
  std::vector<Complex> diff(nn * nn);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      // diff[a][b] = H(p + a, q - b) - H(p - a, q + b), with a = u/2 and b = v/2.
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          diff[static_cast<std::size_t>(a) * nn + static_cast<std::size_t>(b)] =
              h.grid()(s.wrap(p + a), s.wrap(q - b)) - h.grid()(s.wrap(p - a), s.wrap(q + b));
      // E(alpha, beta) = sum_{a,b} diff[a][b] omega^{a alpha + b beta}.
      dft_blocks(diff.data(), n, n, DftSign::backward);  // over b
      for (std::size_t a = 0; a < nn; ++a)
        for (std::size_t b = a + 1; b < nn; ++b) std::swap(diff[a * nn + b], diff[b * nn + a]);
      dft_blocks(diff.data(), n, n, DftSign::backward);  // over a; now indexed [beta][alpha]
      const Eigen::Index row = static_cast<Eigen::Index>(p) * n + q;
      for (int pp = 0; pp < n; ++pp) {
        for (int qp = 0; qp < n; ++qp) {
          const std::size_t alpha = static_cast<std::size_t>(s.wrap(2LL * (q - qp)));
          const std::size_t beta = static_cast<std::size_t>(s.wrap(2LL * (p - pp)));
          // -i * E, real part only: the kernel of a real symbol is real.
          dense(row, static_cast<Eigen::Index>(pp) * n + qp) = scale * diff[beta * nn + alpha].imag();
        }
      }
    }
  }
  return MoyalKernel(h.space(), std::move(dense));
}

MoyalKernel build_kernel(const HamiltonianSpec& h, double t) { return build_kernel(h.symbol_at(t)); }

FactorizedMoyalKernel::FactorizedMoyalKernel(const WeylSymbol& h) : space_(h.space()) {
  const DualBasisSpace& s = *space_;
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  // Hhat(a, b) = sum_{p,q} H(p, q) omega^{2 p b - 2 q a}.
  // G(x, y) = sum_{p,q} H(p, q) omega^{p x - q y}, then Hhat(a, b) = G(2b, 2a).
  std::vector<Complex> buf(h.grid().data(), h.grid().data() + nn * nn);  // column q contiguous in p
  dft_blocks(buf.data(), n, n, DftSign::backward);                          // over p: index x
  std::vector<Complex> t(nn * nn);
  for (std::size_t q = 0; q < nn; ++q)
    for (std::size_t x = 0; x < nn; ++x) t[x * nn + q] = buf[q * nn + x];
  dft_blocks(t.data(), n, n, DftSign::forward);  // over q: index y; t[x][y]
  hhat_.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      hhat_(a, b) = t[static_cast<std::size_t>(s.wrap(2LL * b)) * nn + static_cast<std::size_t>(s.wrap(2LL * a))];

  column_fft_.resize(n, n);
  reversed_fft_.resize(n, n);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      column_fft_(a, b) = hhat_(a, b);
      reversed_fft_(a, b) = hhat_(s.wrap(-a), s.wrap(-b));
    }
  }
  dft_blocks(column_fft_.data(), n, n, DftSign::forward);
  dft_blocks(reversed_fft_.data(), n, n, DftSign::forward);
}

Complex FactorizedMoyalKernel::operator()(int p, int q, int pp, int qp) const {
  const DualBasisSpace& s = *space_;
  const double scale = 1.0 / (static_cast<double>(s.dimension()) * s.dimension());
  const long long sigma = static_cast<long long>(p) * qp - static_cast<long long>(pp) * q;
  const Complex forward = s.omega(2 * sigma) * hhat_(s.wrap(p - pp), s.wrap(q - qp));
  const Complex backward = s.omega(-2 * sigma) * hhat_(s.wrap(pp - p), s.wrap(qp - q));
  return Complex(0.0, -scale) * (forward - backward);
}

WeylSymbol FactorizedMoyalKernel::apply(const WeylSymbol& f) const {
  require_same_space(*space_, *f.space(), "FactorizedMoyalKernel::apply");
  const DualBasisSpace& s = *space_;
  const int n = s.dimension();
  const std::size_t nn = static_cast<std::size_t>(n);
  // F_{q'}(k): forward DFT over p' of f(., q'); columns are contiguous.
  ComplexMatrix fk = f.grid();
  dft_blocks(fk.data(), n, n, DftSign::forward);
  // For output column q, accumulate in the frequency domain:
  //   T1(k) = sum_{q'} Hc_{q-q'}(k - 2q') F_{q'}(k - 2q' + 2q)
  //   T2(k) = sum_{q'} Rc_{q-q'}(k + 2q') F_{q'}(k + 2q' - 2q)
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < n; ++q) {
    Complex* out = acc.col(q).data();
    for (int qp = 0; qp < n; ++qp) {
      const Complex* hc = column_fft_.col(s.wrap(q - qp)).data();
      const Complex* rc = reversed_fft_.col(s.wrap(q - qp)).data();
      const Complex* fc = fk.col(qp).data();
      const int shift1 = s.wrap(-2LL * qp);
      const int shift1f = s.wrap(-2LL * qp + 2LL * q);
      const int shift2 = s.wrap(2LL * qp);
      const int shift2f = s.wrap(2LL * qp - 2LL * q);
      for (int k = 0; k < n; ++k) {
        const int i1 = k + shift1 >= n ? k + shift1 - n : k + shift1;
        const int i1f = k + shift1f >= n ? k + shift1f - n : k + shift1f;
        const int i2 = k + shift2 >= n ? k + shift2 - n : k + shift2;
        const int i2f = k + shift2f >= n ? k + shift2f - n : k + shift2f;
        out[k] += hc[i1] * fc[i1f] - rc[i2] * fc[i2f];
      }
    }
  }
  dft_blocks(acc.data(), n, n, DftSign::backward);
  const double scale = 1.0 / (static_cast<double>(nn) * nn * nn);
  return WeylSymbol(space_, Complex(0.0, -scale) * acc);
}

OperatorMatrix exact_evolution(const OperatorMatrix& rho, const OperatorMatrix& h, double t) {
  require_same_space(*rho.space(), *h.space(), "exact_evolution");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.in_basis(Basis::position).entries());
  const ComplexMatrix& v = es.eigenvectors();
  const Eigen::VectorXd& e = es.eigenvalues();
  ComplexMatrix in_eigen = v.adjoint() * rho.in_basis(Basis::position).entries() * v;
  const int n = rho.dimension();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) in_eigen(a, b) *= std::polar(1.0, -(e(a) - e(b)) * t);
  return OperatorMatrix(rho.space(), v * in_eigen * v.adjoint(), Basis::position, OperatorKind::general);
}

namespace {

constexpr double kStepWarningThreshold = 0.1;

ComplexMatrix unitary_step(const ComplexMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexMatrix& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
  return v * phases.asDiagonal() * v.adjoint();
}

void check_finite(const ComplexMatrix& m, int step) {
  if (!m.allFinite()) {
    throw PropagationError(step, "non-finite value in the state at step " + std::to_string(step));
  }
}

// Classical fourth-order step for f' = rhs(f); the caller fixes the
// Hamiltonian sample (midpoint of the step) inside rhs.
void rk4_step(ComplexMatrix& f, double dt, const std::function<ComplexMatrix(const ComplexMatrix&)>& rhs) {
  const ComplexMatrix k1 = rhs(f);
  const ComplexMatrix k2 = rhs(f + 0.5 * dt * k1);
  const ComplexMatrix k3 = rhs(f + 0.5 * dt * k2);
  const ComplexMatrix k4 = rhs(f + dt * k3);
  f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<WeylSymbol> evolve_symbols(const OperatorMatrix& initial, const HamiltonianSpec& h,
                                       const PropagatorConfig& config, std::vector<std::string>* warnings) {
  config.validate();
  require_same_space(*initial.space(), *h.space(), "evolve");
  if (!is_hermitian(initial.entries())) throw std::invalid_argument("evolve: initial operator must be Hermitian");
  const SpacePtr& space = initial.space();
  const double dt = config.dt;

  if (warnings && config.engine != Engine::oracle && config.integrator == Integrator::rk4) {
    const double product = h.spectral_radius() * dt;
    if (product > kStepWarningThreshold) {
      std::ostringstream msg;
      msg << "rk4 step may be too large: |H| dt = " << product << " > " << kStepWarningThreshold;
      warnings->push_back(msg.str());
    }
  }

  std::vector<WeylSymbol> out;
  out.reserve(static_cast<std::size_t>(config.steps / config.stride + 1));

  const bool split = config.integrator == Integrator::split_step && config.engine == Engine::spectral_moyal;
  if (split && !h.separable_at(0.0)) {
    throw std::invalid_argument("split_step needs a Hamiltonian of the form V(Q) + T(P)");
  }

  if (config.engine == Engine::oracle || split) {
    // Operator-level propagation.
    ComplexMatrix rho = initial.in_basis(Basis::position).entries();
    out.push_back(weyl_symbol(OperatorMatrix(space, rho)));
    if (config.engine == Engine::oracle && !h.time_dependent()) {
      const OperatorMatrix hm = h.matrix_at(0.0);
      for (int step = config.stride; step <= config.steps; step += config.stride) {
        const OperatorMatrix r = exact_evolution(initial, hm, step * dt);
        check_finite(r.entries(), step);
        out.push_back(weyl_symbol(r));
      }
      return out;
    }
    const int n = space->dimension();
    const ComplexMatrix& t = space->overlap();
    for (int step = 1; step <= config.steps; ++step) {
      const double mid = (step - 0.5) * dt;
      if (split) {
        const SeparableParts parts = *h.separable_at(mid);
        auto apply_diagonal = [&](ComplexMatrix& m, const Eigen::VectorXd& values, double tau) {
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) m(a, b) *= std::polar(1.0, -(values(a) - values(b)) * tau);
        };
        apply_diagonal(rho, parts.potential, 0.5 * dt);
        ComplexMatrix in_p = t * rho * t.adjoint();
        apply_diagonal(in_p, parts.kinetic, dt);
        rho = t.adjoint() * in_p * t;
        apply_diagonal(rho, parts.potential, 0.5 * dt);
      } else {
        const ComplexMatrix u = unitary_step(h.matrix_at(mid).entries(), dt);
        rho = u * rho * u.adjoint();
      }
      check_finite(rho, step);
      if (step % config.stride == 0) out.push_back(weyl_symbol(OperatorMatrix(space, rho)));
    }
    return out;
  }

  ComplexMatrix f = weyl_symbol(initial).grid();
  out.emplace_back(space, f);
  std::optional<OperatorMatrix> fixed_h;
  std::optional<MoyalKernel> fixed_kernel;
  if (!h.time_dependent()) {
    if (config.engine == Engine::spectral_moyal) fixed_h = h.matrix_at(0.0);
    else fixed_kernel = build_kernel(h, 0.0);
  }
  for (int step = 1; step <= config.steps; ++step) {
    const double mid = (step - 0.5) * dt;
    if (config.engine == Engine::spectral_moyal) {
      const OperatorMatrix hm = fixed_h ? *fixed_h : h.matrix_at(mid);
      rk4_step(f, dt, [&](const ComplexMatrix& g) { return moyal_rhs(hm, WeylSymbol(space, g)).grid(); });
    } else {
      const MoyalKernel kernel = fixed_kernel ? *fixed_kernel : build_kernel(h, mid);
      rk4_step(f, dt, [&](const ComplexMatrix& g) { return kernel.apply(WeylSymbol(space, g)).grid(); });
    }
    check_finite(f, step);
    if (step % config.stride == 0) out.emplace_back(space, f);
  }
  return out;
}

Trajectory evolve(const OperatorMatrix& initial_state, const HamiltonianSpec& h, const PropagatorConfig& config) {
  if (initial_state.kind() != OperatorKind::density) {
    throw std::invalid_argument("evolve expects a density-tagged initial state");
  }
  Trajectory traj;
  traj.config = config;
  traj.dimension = initial_state.dimension();
  const std::vector<WeylSymbol> symbols = evolve_symbols(initial_state, h, config, &traj.warnings);
  const double n = initial_state.dimension();
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const int step = static_cast<int>(k) * config.stride;
    const double time = step * config.dt;
    const WeylSymbol& sym = symbols[k];
    const RealMatrix f = sym.real();
    const RealMatrix hs = h.symbol_at(time).real();
    Snapshot snap{step,
                  time,
                  QuasiDistribution(sym.space(), f.cast<Complex>(), DistributionKind::wigner),
                  f.sum() / n,
                  f.cwiseAbs2().sum() / n,
                  hs.cwiseProduct(f).sum() / n,
                  sym.max_imag()};
    traj.snapshots.push_back(std::move(snap));
  }
  return traj;
}

}  // namespace phasespace
