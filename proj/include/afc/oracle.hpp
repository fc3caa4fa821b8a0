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

#ifndef AFC_ORACLE_HPP_
#define AFC_ORACLE_HPP_

// Slow reference implementations. Nothing here calls into afc::fft or
// afc::spectral; all transforms are direct O(N^2) sums.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "afc/errors.hpp"
#include "afc/poly_activation.hpp"
#include "afc/tensor.hpp"

namespace afc::oracle {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

namespace detail {

// exp(sign * 2 pi i q / n) for q in [0, n). Indexing by (k * j) mod n keeps
// the phase argument exact.
inline ComplexVector twiddles(std::size_t n, int sign) {
  ComplexVector w(n);
  for (std::size_t q = 0; q < n; ++q) {
    const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(q) /
                     static_cast<double>(n);
    w[q] = {std::cos(a), std::sin(a)};
  }
  return w;
}

// Signed frequency of bin k: k for k <= n/2, k - n otherwise.
inline long signed_bin(std::size_t k, std::size_t n) {
  return 2 * k <= n ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace detail

inline ComplexVector naive_dft(std::span<const Complex> x) {
  const std::size_t n = x.size();
  const ComplexVector w = detail::twiddles(n, -1);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t j = 0; j < n; ++j) acc += x[j] * w[(k * j) % n];
    out[k] = acc;
  }
  return out;
}

inline ComplexVector naive_dft(std::span<const double> x) {
  ComplexVector c(x.begin(), x.end());
  return naive_dft(c);
}

inline ComplexVector naive_idft(std::span<const Complex> spec) {
  const std::size_t n = spec.size();
  const ComplexVector w = detail::twiddles(n, +1);
  ComplexVector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) acc += spec[k] * w[(k * j) % n];
    out[j] = acc / static_cast<double>(n);
  }
  return out;
}

/// Periodic (Dirichlet) interpolant of one period of a sampled signal. The
/// even-N Nyquist bin is treated as a pure cosine.
class ContinuousSampler {
 public:
  explicit ContinuousSampler(std::span<const double> base)
      : base_(base.begin(), base.end()), spec_(naive_dft(base)) {
    if (base_.empty()) throw DomainError("ContinuousSampler: empty signal");
  }

  std::size_t period() const { return base_.size(); }
  std::span<const double> base() const { return base_; }

  /// Value at continuous position t, in sample units.
  double operator()(double t) const {
    const std::size_t n = base_.size();
    const double dn = static_cast<double>(n);
    double acc = spec_[0].real();
    for (std::size_t k = 1; 2 * k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) * t / dn;
      acc += 2.0 * (spec_[k] * Complex(std::cos(a), std::sin(a))).real();
    }
    if (n % 2 == 0) acc += spec_[n / 2].real() * std::cos(std::numbers::pi * t);
    return acc / dn;
  }

 private:
  std::vector<double> base_;
  ComplexVector spec_;
};

inline double sinc_reconstruct(std::span<const double> x, double t) {
  return ContinuousSampler(x)(t);
}

/// out[n] = interpolant(n - delta).
inline Signal oracle_shift(std::span<const double> x, double delta) {
  const ContinuousSampler s(x);
  Signal out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) out[n] = s(static_cast<double>(n) - delta);
  return out;
}

/// Ideal LPF by direct spectral truncation: keep |k| < N c / 2.
inline Signal lowpass(std::span<const double> x, double cutoff) {
  const std::size_t n = x.size();
  ComplexVector spec = naive_dft(x);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = std::abs(static_cast<double>(detail::signed_bin(k, n)));
    if (!(2.0 * f < static_cast<double>(n) * cutoff)) spec[k] = 0.0;
  }
  const ComplexVector y = naive_idft(spec);
  Signal out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
  return out;
}

/// Circular convolution with a real kernel h: out[n] = sum_m h[m] x[n - m].
inline Signal circular_convolve(std::span<const double> x, std::span<const double> h) {
  const std::size_t n = x.size();
  if (h.size() != n) throw ShapeError("circular_convolve: length mismatch");
  Signal out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < n; ++m) out[i] += h[m] * x[(i + n - m) % n];
  }
  return out;
}

/// Interpolant resampled at t = m / factor.
inline Signal upsample(std::span<const double> x, std::size_t factor) {
  const ContinuousSampler s(x);
  Signal out(x.size() * factor);
  for (std::size_t m = 0; m < out.size(); ++m) {
    out[m] = s(static_cast<double>(m) / static_cast<double>(factor));
  }
  return out;
}

/// Direct band-limited decimation: sample at n' * s the trigonometric
/// polynomial restricted to |k| <= M/2 (both boundary bins kept).
inline Signal downsample(std::span<const double> x, std::size_t factor) {
  const std::size_t n = x.size();
  if (factor == 0 || n % factor != 0) throw ShapeError("oracle::downsample: bad factor");
  const std::size_t m = n / factor;
  const ComplexVector spec = naive_dft(x);
  Signal out(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) {
      const long f = detail::signed_bin(k, n);
      if (2 * std::abs(f) > static_cast<long>(m)) continue;
      const double a = 2.0 * std::numbers::pi * static_cast<double>(f) *
                       static_cast<double>(j * factor) / static_cast<double>(n);
      acc += spec[k] * Complex(std::cos(a), std::sin(a));
    }
    out[j] = acc.real() / static_cast<double>(n);
  }
  return out;
}

/// Samples at integer positions of the part of a densely sampled periodic
/// function (spacing 1/F) that lies strictly below the original Nyquist
/// frequency, |k| < N/2.
inline Signal band_project(std::span<const double> dense, std::size_t oversample,
                           std::size_t n) {
  const std::size_t len = dense.size();
  if (len != n * oversample) throw ShapeError("band_project: length mismatch");
  const ComplexVector w = detail::twiddles(len, -1);
  Signal out(n, 0.0);
  std::vector<std::pair<long, Complex>> bins;
  for (std::size_t k = 0; k < len; ++k) {
    const long f = detail::signed_bin(k, len);
    if (2 * std::abs(f) >= static_cast<long>(n)) continue;
    Complex acc{};
    for (std::size_t j = 0; j < len; ++j) acc += dense[j] * w[(k * j) % len];
    bins.emplace_back(f, acc);
  }
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (const auto& [f, v] : bins) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(f) *
                       static_cast<double>(j) / static_cast<double>(n);
      acc += v * Complex(std::cos(a), std::sin(a));
    }
    out[j] = acc.real() / static_cast<double>(len);
  }
  return out;
}

inline void check_oversample(std::size_t oversample) {
  // A degree-2 polynomial doubles the bandwidth; the dense grid must hold it.
  if (oversample < 2) {
    throw ConfigError("oracle: oversampling factor must be >= 2, got " +
                      std::to_string(oversample));
  }
}

/// Continuous-domain simulation of the alias-free activation on a 1-D signal:
/// evaluate the interpolant on an F-times denser grid, apply the polynomial
/// pointwise, keep |k| < N/2, sample on the original grid.
inline Signal oracle_alias_free_poly(std::span<const double> x, const PolyCoeffs& p,
                                     double scale, std::size_t oversample = 16) {
  check_oversample(oversample);
  const std::size_t n = x.size();
  const ContinuousSampler s(x);
  Signal dense(n * oversample);
  for (std::size_t j = 0; j < dense.size(); ++j) {
    const double v = scale * s(static_cast<double>(j) / static_cast<double>(oversample));
    dense[j] = scale * (p.a0 + p.a1 * v + p.a2 * v * v);
  }
  return band_project(dense, oversample, n);
}

/// 2-D version: the 2-D periodic interpolant is the tensor product of the
/// 1-D ones, so the dense grid is built row-then-column; the polynomial is
/// applied on the full 2-D dense grid.
inline Tensor3D oracle_alias_free_poly_2d(const Tensor3D& x, const PolyActivation& p,
                                          std::size_t oversample = 16) {
  check_oversample(oversample);
  if (p.channels() != x.channels()) {
    throw ShapeError("oracle_alias_free_poly_2d: channel mismatch");
  }
  const std::size_t h = x.height(), w = x.width();
  const std::size_t dh = h * oversample, dw = w * oversample;
  const double f = static_cast<double>(oversample);
  Tensor3D out(x.channels(), h, w);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    // rows: h x dw
    std::vector<double> rows(h * dw);
    for (std::size_t i = 0; i < h; ++i) {
      std::vector<double> row(w);
      for (std::size_t j = 0; j < w; ++j) row[j] = x(c, i, j);
      const ContinuousSampler s(row);
      for (std::size_t j = 0; j < dw; ++j) rows[i * dw + j] = s(static_cast<double>(j) / f);
    }
    // columns: dh x dw, then the polynomial
    std::vector<double> dense(dh * dw);
    for (std::size_t j = 0; j < dw; ++j) {
      std::vector<double> col(h);
      for (std::size_t i = 0; i < h; ++i) col[i] = rows[i * dw + j];
      const ContinuousSampler s(col);
      for (std::size_t i = 0; i < dh; ++i) {
        const double v = p.scale * s(static_cast<double>(i) / f);
        const PolyCoeffs& q = p.coeffs[c];
        dense[i * dw + j] = p.scale * (q.a0 + q.a1 * v + q.a2 * v * v);
      }
    }
    // project rows: dh x w
    std::vector<double> half(dh * w);
    for (std::size_t i = 0; i < dh; ++i) {
      const Signal r = band_project(std::span<const double>(dense).subspan(i * dw, dw),
                                    oversample, w);
      for (std::size_t j = 0; j < w; ++j) half[i * w + j] = r[j];
    }
    // project columns: h x w
    for (std::size_t j = 0; j < w; ++j) {
      std::vector<double> col(dh);
      for (std::size_t i = 0; i < dh; ++i) col[i] = half[i * w + j];
      const Signal r = band_project(col, oversample, h);
      for (std::size_t i = 0; i < h; ++i) out(c, i, j) = r[i];
    }
  }
  return out;
}

}  // namespace afc::oracle

#endif  // AFC_ORACLE_HPP_
