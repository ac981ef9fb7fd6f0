#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace grushin::detail {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<std::vector<int>, std::size_t, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void dft_batch(std::complex<double>* data, const std::vector<int>& shape, std::size_t howmany, int sign) {
  if (howmany == 0) return;
  std::size_t block = 1;
  for (int n : shape) block *= static_cast<std::size_t>(n);
  auto* ptr = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mu);
    auto key = std::make_tuple(shape, howmany, sign);
    auto it = c.plans.find(key);
    if (it == c.plans.end()) {
      // FFTW_ESTIMATE leaves the array untouched while planning
      plan = fftw_plan_many_dft(static_cast<int>(shape.size()), shape.data(), static_cast<int>(howmany), ptr,
                                nullptr, 1, static_cast<int>(block), ptr, nullptr, 1, static_cast<int>(block),
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
      c.plans.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace grushin::detail
