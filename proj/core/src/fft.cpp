#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace phasespace::detail {

namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int length, int count, DftSign sign) {
    const Key key{length, count, static_cast<int>(sign)};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(static_cast<std::size_t>(length) * count);
    int n[] = {length};
    fftw_plan plan = fftw_plan_many_dft(1, n, count, scratch.data(), nullptr, 1, length, scratch.data(), nullptr, 1,
                                        length, static_cast<int>(sign), FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  using Key = std::tuple<int, int, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dft_blocks(std::complex<double>* data, int length, int count, DftSign sign) {
  fftw_plan plan = cache().get(length, count, sign);
  auto* raw = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, raw, raw);
}

}  // namespace phasespace::detail
