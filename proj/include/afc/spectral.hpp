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

#ifndef AFC_SPECTRAL_HPP_
#define AFC_SPECTRAL_HPP_

// Exact DFT-domain resampling of periodic signals. A length-N signal is one
// period of a band-limited continuous signal sampled at unit spacing; every
// operation here is exact with respect to that continuous signal, under the
// convention that the even-N Nyquist bin carries a pure cosine.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/fft.hpp"
#include "afc/rational.hpp"
#include "afc/tensor.hpp"

namespace afc::spectral {

/// Real per-bin multiplier applied in the DFT domain.
struct DftMask {
  std::vector<double> gains;

  std::size_t size() const { return gains.size(); }
  double operator[](std::size_t k) const { return gains[k]; }

  /// gains[k] == gains[(M - k) mod M]; guarantees real output for real input.
  bool conjugate_symmetric() const {
    const std::size_t m = gains.size();
    for (std::size_t k = 1; k < m; ++k) {
      if (gains[k] != gains[m - k]) return false;
    }
    return true;
  }

  friend bool operator==(const DftMask&, const DftMask&) = default;
};

/// Rectangle filter passing bins k < N*c/2 and k > N - N*c/2.
inline DftMask lowpass_mask(std::size_t n, Rational cutoff) {
  if (n == 0) throw DomainError("lowpass_mask: N must be >= 1");
  if (cutoff.num() <= 0 || cutoff > Rational(1)) {
    throw DomainError("lowpass_mask: cutoff must lie in (0, 1], got " +
                      cutoff.to_string());
  }
  // k < N c / 2  <=>  2 k den < N num, evaluated exactly.
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t num = cutoff.num();
  const std::int64_t den = cutoff.den();
  DftMask mask{std::vector<double>(n, 0.0)};
  for (std::int64_t k = 0; k < nn; ++k) {
    const bool low = 2 * k * den < nn * num;
    const bool high = 2 * k * den > 2 * nn * den - nn * num;
    mask.gains[static_cast<std::size_t>(k)] = (low || high) ? 1.0 : 0.0;
  }
  return mask;
}

/// Reconstruction kernel for upsampling a length-N signal by I. Mask length N*I.
/// Even N: the Nyquist image at N/2 and N(I - 1/2) is split with gain 1/2.
inline DftMask upsample_mask(std::size_t n, std::size_t factor) {
  if (n == 0) throw DomainError("upsample_mask: N must be >= 1");
  if (factor < 2) throw DomainError("upsample_mask: factor must be >= 2");
  const std::size_t len = n * factor;
  DftMask mask{std::vector<double>(len, 0.0)};
  if (n % 2 == 0) {
    const std::size_t half = n / 2;
    const std::size_t upper = len - half;  // N (I - 1/2)
    for (std::size_t k = 0; k < half; ++k) mask.gains[k] = 1.0;
    for (std::size_t k = upper + 1; k < len; ++k) mask.gains[k] = 1.0;
    mask.gains[half] = 0.5;
    mask.gains[upper] = 0.5;
  } else {
    const std::size_t half = n / 2;        // floor(N/2)
    const std::size_t upper = len - half;  // ceil(N (I - 1/2))
    for (std::size_t k = 0; k <= half; ++k) mask.gains[k] = 1.0;
    for (std::size_t k = upper; k < len; ++k) mask.gains[k] = 1.0;
  }
  return mask;
}

/// Band selected when decimating a length-N signal by s: |k| < M/2 with
/// M = N/s, plus both boundary bins +-M/2 when M is even. Left inverse of
/// upsample_1d.
inline DftMask decimation_mask(std::size_t n, std::size_t factor) {
  if (factor < 2) throw DomainError("decimation_mask: factor must be >= 2");
  if (n == 0 || n % factor != 0) {
    throw ShapeError("decimation_mask: length " + std::to_string(n) +
                     " not divisible by " + std::to_string(factor));
  }
  const std::size_t m = n / factor;
  DftMask mask{std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; 2 * k <= m; ++k) {
    mask.gains[k] = 1.0;
    mask.gains[(n - k) % n] = 1.0;
  }
  return mask;
}

inline fft::Spectrum apply_mask_spectrum(std::span<const double> x,
                                         const DftMask& mask) {
  if (mask.size() != x.size()) {
    throw ShapeError("apply_mask: mask length " + std::to_string(mask.size()) +
                     " != signal length " + std::to_string(x.size()));
  }
  fft::Spectrum spec = fft::forward(x);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= mask[k];
  return spec;
}

/// IDFT(DFT(x) * mask), real part.
inline Signal apply_mask(std::span<const double> x, const DftMask& mask) {
  return fft::inverse_real(apply_mask_spectrum(x, mask));
}

inline Signal ideal_lpf_1d(std::span<const double> x, Rational cutoff) {
  return apply_mask(x, lowpass_mask(x.size(), cutoff));
}

/// Algorithm-2 upsampling with an explicit reconstruction mask. The DFT of
/// the zero-stuffed signal is the input spectrum tiled I times; the gain I
/// restores the original samples on the coarse grid.
inline Signal upsample_1d(std::span<const double> x, std::size_t factor,
                          const DftMask& mask) {
  if (factor < 2) throw DomainError("upsample_1d: factor must be >= 2");
  const std::size_t n = x.size();
  if (mask.size() != n * factor) {
    throw ShapeError("upsample_1d: mask length mismatch");
  }
  const fft::Spectrum spec = fft::forward(x);
  fft::Spectrum up(n * factor);
  const double gain = static_cast<double>(factor);
  for (std::size_t k = 0; k < up.size(); ++k) {
    up[k] = spec[k % n] * (gain * mask[k]);
  }
  return fft::inverse_real(up);
}

inline Signal upsample_1d(std::span<const double> x, std::size_t factor) {
  if (factor < 2) throw DomainError("upsample_1d: factor must be >= 2");
  return upsample_1d(x, factor, upsample_mask(x.size(), factor));
}

inline Signal downsample_1d(std::span<const double> x, std::size_t factor,
                            const DftMask& mask) {
  if (factor < 2) throw DomainError("downsample_1d: factor must be >= 2");
  const std::size_t n = x.size();
  if (n == 0 || n % factor != 0) {
    throw ShapeError("downsample_1d: length " + std::to_string(n) +
                     " not divisible by " + std::to_string(factor));
  }
  if (mask.size() != n) throw ShapeError("downsample_1d: mask length mismatch");
  const std::size_t m = n / factor;
  const fft::Spectrum spec = fft::forward(x);
  // Subsampling by s folds the spectrum: Y[k] = (1/s) sum_r X[k + r M].
  fft::Spectrum folded(m);
  const double inv = 1.0 / static_cast<double>(factor);
  for (std::size_t k = 0; k < n; ++k) {
    if (mask[k] != 0.0) folded[k % m] += spec[k] * (mask[k] * inv);
  }
  return fft::inverse_real(folded);
}

inline Signal downsample_1d(std::span<const double> x, std::size_t factor) {
  if (factor < 2) throw DomainError("downsample_1d: factor must be >= 2");
  if (x.empty() || x.size() % factor != 0) {
    throw ShapeError("downsample_1d: length " + std::to_string(x.size()) +
                     " not divisible by " + std::to_string(factor));
  }
  return downsample_1d(x, factor, decimation_mask(x.size(), factor));
}

/// Keeps every s-th sample starting at index 0.
inline Signal subsample_1d(std::span<const double> x, std::size_t factor) {
  if (factor == 0 || x.size() % factor != 0) {
    throw ShapeError("subsample_1d: length not divisible by factor");
  }
  Signal out(x.size() / factor);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i * factor];
  return out;
}

/// Circular roll: out[n] = x[n - m].
inline Signal roll_1d(std::span<const double> x, std::int64_t m) {
  const auto n = static_cast<std::int64_t>(x.size());
  Signal out(x.size());
  if (n == 0) return out;
  const std::int64_t r = ((m % n) + n) % n;
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>((i + r) % n)] = x[static_cast<std::size_t>(i)];
  }
  return out;
}

/// Translation by m/n samples: out[k] = x(k - m/n) on the band-limited
/// interpolant. Upsample by n, roll by m, downsample by n.
inline Signal fractional_shift_1d(std::span<const double> x, Rational shift) {
  if (shift.is_integer()) return roll_1d(x, shift.num());
  const auto factor = static_cast<std::size_t>(shift.den());
  const Signal up = upsample_1d(x, factor);
  return downsample_1d(roll_1d(up, shift.num()), factor);
}

inline Signal fractional_shift_1d(std::span<const double> x, std::int64_t m,
                                  std::int64_t n) {
  if (n < 1) throw DomainError("fractional_shift_1d: denominator must be >= 1");
  return fractional_shift_1d(x, Rational(m, n));
}

// ---------------------------------------------------------------------------
// Separable 2-D application.

/// Applies `op` to every row of every channel. All rows must map to the same
/// output length.
template <typename Op>
Tensor3D apply_rows(const Tensor3D& t, Op&& op) {
  const std::size_t c = t.channels(), h = t.height(), w = t.width();
  std::vector<double> row(w);
  std::vector<double> out;
  std::size_t out_w = 0;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < h; ++i) {
      for (std::size_t j = 0; j < w; ++j) row[j] = t(ch, i, j);
      Signal r = op(std::span<const double>(row));
      if (out.empty()) {
        out_w = r.size();
        out.reserve(c * h * out_w);
      } else if (r.size() != out_w) {
        throw ShapeError("apply_rows: non-uniform output length");
      }
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return Tensor3D(c, h, out_w, std::move(out));
}

/// Applies `op` to every column of every channel.
template <typename Op>
Tensor3D apply_cols(const Tensor3D& t, Op&& op) {
  const std::size_t c = t.channels(), h = t.height(), w = t.width();
  std::vector<double> col(h);
  std::vector<Signal> results;
  results.reserve(w);
  std::size_t out_h = 0;
  std::vector<double> out;
  for (std::size_t ch = 0; ch < c; ++ch) {
    results.clear();
    for (std::size_t j = 0; j < w; ++j) {
      for (std::size_t i = 0; i < h; ++i) col[i] = t(ch, i, j);
      results.push_back(op(std::span<const double>(col)));
      if (out_h == 0) {
        out_h = results.back().size();
        out.assign(c * out_h * w, 0.0);
      } else if (results.back().size() != out_h) {
        throw ShapeError("apply_cols: non-uniform output length");
      }
    }
    for (std::size_t j = 0; j < w; ++j) {
      for (std::size_t i = 0; i < out_h; ++i) {
        out[(ch * out_h + i) * w + j] = results[j][i];
      }
    }
  }
  return Tensor3D(c, out_h, w, std::move(out));
}

/// Rows first, then columns of the result.
template <typename Op>
Tensor3D apply_separable_2d(const Tensor3D& t, Op&& op) {
  return apply_cols(apply_rows(t, op), op);
}

inline Tensor3D ideal_lpf_2d(const Tensor3D& t, Rational cutoff) {
  const DftMask rows = lowpass_mask(t.width(), cutoff);
  const DftMask cols = lowpass_mask(t.height(), cutoff);
  Tensor3D r = apply_rows(t, [&](std::span<const double> x) { return apply_mask(x, rows); });
  return apply_cols(r, [&](std::span<const double> x) { return apply_mask(x, cols); });
}

inline Tensor3D upsample_2d(const Tensor3D& t, std::size_t factor) {
  if (factor == 1) return t;
  return apply_separable_2d(
      t, [&](std::span<const double> x) { return upsample_1d(x, factor); });
}

inline Tensor3D downsample_2d(const Tensor3D& t, std::size_t factor) {
  if (factor == 1) return t;
  return apply_separable_2d(
      t, [&](std::span<const double> x) { return downsample_1d(x, factor); });
}

inline Tensor3D subsample_2d(const Tensor3D& t, std::size_t factor) {
  if (factor == 1) return t;
  return apply_separable_2d(
      t, [&](std::span<const double> x) { return subsample_1d(x, factor); });
}

/// Circular roll by integer (dy, dx): out[c, i, j] = t[c, i - dy, j - dx].
inline Tensor3D roll_2d(const Tensor3D& t, std::int64_t dy, std::int64_t dx) {
  const auto h = static_cast<std::int64_t>(t.height());
  const auto w = static_cast<std::int64_t>(t.width());
  Tensor3D out(t.channels(), t.height(), t.width());
  for (std::size_t c = 0; c < t.channels(); ++c) {
    for (std::int64_t i = 0; i < h; ++i) {
      const auto si = static_cast<std::size_t>((((i - dy) % h) + h) % h);
      for (std::int64_t j = 0; j < w; ++j) {
        const auto sj = static_cast<std::size_t>((((j - dx) % w) + w) % w);
        out(c, static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = t(c, si, sj);
      }
    }
  }
  return out;
}

/// Rows shifted by dx, columns by dy; the two passes commute.
inline Tensor3D fractional_shift_2d(const Tensor3D& t, const RationalShift& delta) {
  if (delta.dy.is_integer() && delta.dx.is_integer()) {
    return roll_2d(t, delta.dy.num(), delta.dx.num());
  }
  Tensor3D r = delta.dx.num() == 0
                   ? t
                   : apply_rows(t, [&](std::span<const double> x) {
                       return fractional_shift_1d(x, delta.dx);
                     });
  if (delta.dy.num() == 0) return r;
  return apply_cols(r, [&](std::span<const double> x) {
    return fractional_shift_1d(x, delta.dy);
  });
}

/// Cutoff-1 LPF: zeroes the Nyquist row/column bins of even-sized axes so the
/// input is strictly band-limited.
inline Tensor3D sanitize_nyquist(const Tensor3D& t) {
  return ideal_lpf_2d(t, Rational(1));
}

}  // namespace afc::spectral

#endif  // AFC_SPECTRAL_HPP_
