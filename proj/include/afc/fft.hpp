// Copyright 2026 The AFC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#ifndef AFC_FFT_HPP_
#define AFC_FFT_HPP_

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace afc::fft {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

namespace detail {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans live for the whole process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<Complex> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline Spectrum execute(std::span<const Complex> in, int sign) {
  const std::size_t n = in.size();
  Spectrum src(in.begin(), in.end());
  Spectrum out(n);
  if (n == 0) return out;
  fftw_plan p = PlanCache::instance().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(src.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace detail

/// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-2 pi i k n / N).
inline Spectrum forward(std::span<const Complex> x) {
  return detail::execute(x, FFTW_FORWARD);
}

inline Spectrum forward(std::span<const double> x) {
  Spectrum c(x.begin(), x.end());
  return forward(c);
}

/// Inverse DFT carrying the 1/N factor.
inline Spectrum inverse(std::span<const Complex> X) {
  Spectrum out = detail::execute(X, FFTW_BACKWARD);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

/// Inverse DFT keeping only the real part.
inline std::vector<double> inverse_real(std::span<const Complex> X) {
  const Spectrum z = inverse(X);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

}  // namespace afc::fft

#endif  // AFC_FFT_HPP_
