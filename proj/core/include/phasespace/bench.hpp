#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace phasespace {

/// Timed engines: one rk4 step through the commutator path, the dense
/// kernel, or the factorised kernel.
inline constexpr const char* kBenchEngines[] = {"spectral_moyal", "kernel_dense", "kernel_factorized"};

struct BenchConfig {
  std::vector<int> sizes{15, 31, 63};
  std::vector<std::string> engines{"spectral_moyal", "kernel_dense", "kernel_factorized"};
  double min_seconds = 0.2;  // per (N, engine) measurement
  int min_steps = 2;
  int workers = 1;           // sweep points timed concurrently
  std::uint64_t seed = 1;

  void validate() const;
};

struct BenchRow {
  int n = 0;
  std::string engine;
  double seconds_per_step = 0.0;  // fastest observed RK4 step
  std::size_t allocations_estimate = 0;  // bytes of working storage
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Least-squares slope of log(seconds) against log(N), per engine with at least two sizes.
  std::map<std::string, double> exponents;
};

BenchReport benchmark_engines(const BenchConfig& config);

/// Slope of the least-squares line through (log x, log y).
double fit_loglog_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Columns N,engine,seconds_per_step,allocations_estimate.
void write_bench_csv(std::ostream& out, const BenchReport& report);

}  // namespace phasespace
