#include "phasespace/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "phasespace/dynamics.hpp"
#include "phasespace/io.hpp"
#include "phasespace/random.hpp"

namespace phasespace {

namespace {

struct Point {
  int n;
  std::string engine;
};

// Fastest of repeated steps; the minimum is the estimate least disturbed by
// other load on the machine.
template <typename Step>
double time_per_step(const BenchConfig& cfg, Step&& step) {
  using clock = std::chrono::steady_clock;
  step();  // warm-up, also touches FFT plans
  int reps = 0;
  double best = std::numeric_limits<double>::infinity();
  const auto start = clock::now();
  while (reps < cfg.min_steps || std::chrono::duration<double>(clock::now() - start).count() < cfg.min_seconds) {
    const auto t0 = clock::now();
    step();
    best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
    ++reps;
  }
  return best;
}

template <typename Rhs>
void rk4(ComplexMatrix& f, double dt, const Rhs& rhs) {
  const ComplexMatrix k1 = rhs(f);
  const ComplexMatrix k2 = rhs(f + 0.5 * dt * k1);
  const ComplexMatrix k3 = rhs(f + 0.5 * dt * k2);
  const ComplexMatrix k4 = rhs(f + dt * k3);
  f += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

BenchRow measure(const BenchConfig& cfg, const Point& pt) {
  const SpacePtr space = make_space(pt.n);
  Rng rng(cfg.seed + static_cast<std::uint64_t>(pt.n));
  const OperatorMatrix h = random_hermitian(space, rng);
  const WeylSymbol f0 = weyl_symbol(random_density(space, rng));
  const std::size_t nn = static_cast<std::size_t>(pt.n) * pt.n;
  const std::size_t grid_bytes = nn * sizeof(Complex);
  constexpr double dt = 1e-3;
  ComplexMatrix f = f0.grid();
  BenchRow row{pt.n, pt.engine, 0.0, 0};

  if (pt.engine == "spectral_moyal") {
    row.seconds_per_step = time_per_step(cfg, [&] {
      rk4(f, dt, [&](const ComplexMatrix& g) { return moyal_rhs(h, WeylSymbol(space, g)).grid(); });
    });
    row.allocations_estimate = 12 * grid_bytes;
  } else if (pt.engine == "kernel_dense") {
    const MoyalKernel kernel = build_kernel(weyl_symbol(h));
    row.seconds_per_step = time_per_step(cfg, [&] {
      rk4(f, dt, [&](const ComplexMatrix& g) { return kernel.apply(WeylSymbol(space, g)).grid(); });
    });
    row.allocations_estimate = nn * nn * sizeof(double) + 8 * grid_bytes;
  } else if (pt.engine == "kernel_factorized") {
    const FactorizedMoyalKernel kernel(weyl_symbol(h));
    row.seconds_per_step = time_per_step(cfg, [&] {
      rk4(f, dt, [&](const ComplexMatrix& g) { return kernel.apply(WeylSymbol(space, g)).grid(); });
    });
    row.allocations_estimate = 14 * grid_bytes;
  } else {
    throw std::invalid_argument("unknown bench engine '" + pt.engine + "'");
  }
  return row;
}

}  // namespace

void BenchConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("bench needs at least one N");
  for (int n : sizes) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("bench sizes: N must be odd and >= 3 (got " + std::to_string(n) + ")");
  }
  if (engines.empty()) throw std::invalid_argument("bench needs at least one engine");
  for (const auto& e : engines) {
    if (std::find(std::begin(kBenchEngines), std::end(kBenchEngines), e) == std::end(kBenchEngines)) {
      throw std::invalid_argument("unknown bench engine '" + e + "'");
    }
  }
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (!(min_seconds >= 0.0) || min_steps < 1) throw std::invalid_argument("bench timing limits must be positive");
}

BenchReport benchmark_engines(const BenchConfig& config) {
  config.validate();
  std::vector<Point> points;
  for (int n : config.sizes)
    for (const auto& e : config.engines) points.push_back({n, e});

  BenchReport report;
  report.rows.resize(points.size());
  for (std::size_t start = 0; start < points.size(); start += static_cast<std::size_t>(config.workers)) {
    const std::size_t stop = std::min(points.size(), start + static_cast<std::size_t>(config.workers));
    std::vector<std::future<BenchRow>> batch;
    for (std::size_t k = start; k < stop; ++k) {
      batch.push_back(std::async(config.workers > 1 ? std::launch::async : std::launch::deferred,
                                 [&config, pt = points[k]] { return measure(config, pt); }));
    }
    for (std::size_t k = start; k < stop; ++k) report.rows[k] = batch[k - start].get();
  }

  for (const auto& e : config.engines) {
    std::vector<double> x, y;
    for (const auto& r : report.rows)
      if (r.engine == e) {
        x.push_back(r.n);
        y.push_back(r.seconds_per_step);
      }
    if (x.size() >= 2) report.exponents[e] = fit_loglog_exponent(x, y);
  }
  return report;
}

double fit_loglog_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("exponent fit needs two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("exponent fit needs two distinct sizes");
  return sxy / sxx;
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "N,engine,seconds_per_step,allocations_estimate\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << r.engine << ',' << io::format_double(r.seconds_per_step) << ',' << r.allocations_estimate
        << '\n';
  }
}

}  // namespace phasespace
