#include "wavedesign/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace wavedesign::fft {
namespace {

// fftw_plan_* is not reentrant; execution of an existing plan through the
// new-array interface is.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* data;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  const PlanPair& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    AlignedBuffer in(n), out(n);
    const int len = static_cast<int>(n);
    PlanPair p;
    p.forward = fftw_plan_dft_1d(len, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_1d(len, in.data, out.data, FFTW_BACKWARD, FFTW_ESTIMATE);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

cvec run(fftw_plan plan, std::span<const std::complex<double>> x, std::size_t n) {
  AlignedBuffer in(n), out(n);
  auto* src = reinterpret_cast<std::complex<double>*>(in.data);
  const std::size_t m = std::min(n, x.size());
  std::copy_n(x.begin(), m, src);
  std::fill(src + m, src + n, std::complex<double>{});
  fftw_execute_dft(plan, in.data, out.data);
  auto* dst = reinterpret_cast<std::complex<double>*>(out.data);
  return cvec(dst, dst + n);
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

cvec forward(std::span<const std::complex<double>> x, std::size_t length) {
  if (length == 0) return {};
  return run(cache().get(length).forward, x, length);
}

cvec inverse(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  if (n == 0) return {};
  cvec y = run(cache().get(n).backward, x, n);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : y) v *= scale;
  return y;
}

}  // namespace wavedesign::fft
