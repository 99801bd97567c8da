#include "zs/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace zs {
namespace {

// FFTW plan creation is not thread-safe; new-array execution is. Plans are
// cached per (size, sign) with FFTW_UNALIGNED so heap vectors can be used.
class PlanCache {
 public:
  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> dummy(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(dummy.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr,
                                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<Complex> dft(std::span<const Complex> in, int sign) {
  if (in.empty()) return {};
  std::vector<Complex> out(in.begin(), in.end());
  fftw_plan plan = plan_cache().get(in.size(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, ptr, ptr);
  return out;
}

ComplexField spectral_translate(const ComplexField& f, double s) {
  const std::size_t m = f.grid.n - 1;
  const double period = f.grid.x_max - f.grid.x_min;
  std::vector<Complex> hat = dft(std::span(f.values.data(), m), -1);
  for (std::size_t j = 0; j < m; ++j) {
    const double js = (j <= m / 2) ? static_cast<double>(j)
                                   : static_cast<double>(j) - static_cast<double>(m);
    const double k = 2.0 * kPi * js / period;
    hat[j] *= std::exp(-kI * (k * s));
  }
  std::vector<Complex> shifted = dft(hat, +1);
  ComplexField out = ComplexField::zeros(f.grid);
  for (std::size_t j = 0; j < m; ++j) out.values[j] = shifted[j] / static_cast<double>(m);
  out.values[m] = out.values[0];
  return out;
}

std::vector<Complex> cell_midpoint_values(const ComplexField& f) {
  const std::size_t m = f.grid.n - 1;
  std::vector<Complex> hat = dft(std::span(f.values.data(), m), -1);
  std::vector<Complex> padded(2 * m, Complex{0.0, 0.0});
  // Odd m has no lone Nyquist bin; an even m splits it between both copies.
  for (std::size_t j = 0; j < m; ++j) {
    if (j < (m + 1) / 2) {
      padded[j] = hat[j];
    } else if (2 * j == m) {
      padded[j] = 0.5 * hat[j];
      padded[j + m] = 0.5 * hat[j];
    } else {
      padded[j + m] = hat[j];
    }
  }
  std::vector<Complex> fine = dft(padded, +1);
  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = fine[2 * i + 1] / static_cast<double>(m);
  return out;
}

std::vector<Complex> linear_convolution(std::span<const Complex> a,
                                        std::span<const Complex> b) {
  const std::size_t need = a.size() + b.size() - 1;
  std::size_t size = 1;
  while (size < need) size <<= 1;
  std::vector<Complex> fa(size, Complex{0.0, 0.0});
  std::vector<Complex> fb(size, Complex{0.0, 0.0});
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  std::vector<Complex> ha = dft(fa, -1);
  const std::vector<Complex> hb = dft(fb, -1);
  for (std::size_t j = 0; j < size; ++j) ha[j] *= hb[j];
  std::vector<Complex> conv = dft(ha, +1);
  std::vector<Complex> out(need);
  for (std::size_t j = 0; j < need; ++j) out[j] = conv[j] / static_cast<double>(size);
  return out;
}

}  // namespace zs
