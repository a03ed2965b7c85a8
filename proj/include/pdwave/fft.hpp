#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include <fftw3.h>

#include "pdwave/types.hpp"

// Thin wrapper over FFTW. Transforms are unnormalized:
//   forward:  X_k = sum_m x_m e^{-j2pi mk/M}
//   backward: x_m = sum_k X_k e^{+j2pi km/M}
// Plans are cached per thread; plan creation/destruction goes through the
// global planner lock (FFTW's planner is not thread-safe, execution is).

namespace pdwave::detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  FftPlan(int size, int sign) : size_(size) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size));
    plan_ = fftw_plan_dft_1d(size, buf_, buf_, sign, FFTW_ESTIMATE);
  }

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_) fftw_destroy_plan(plan_);
    if (buf_) fftw_free(buf_);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(cvec& a) {
    auto* p = reinterpret_cast<cplx*>(buf_);
    std::copy(a.begin(), a.end(), p);
    fftw_execute(plan_);
    std::copy(p, p + size_, a.begin());
  }

 private:
  int size_;
  fftw_complex* buf_ = nullptr;
  fftw_plan plan_ = nullptr;
};

inline void transform_inplace(cvec& a, int sign) {
  require(!a.empty(), "transform: empty input");
  thread_local std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  auto key = std::make_pair(static_cast<int>(a.size()), sign);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<FftPlan>(key.first, sign)).first;
  }
  it->second->execute(a);
}

}  // namespace pdwave::detail

namespace pdwave::fft {

inline void forward_inplace(cvec& a) { detail::transform_inplace(a, FFTW_FORWARD); }
inline void backward_inplace(cvec& a) { detail::transform_inplace(a, FFTW_BACKWARD); }

}  // namespace pdwave::fft
