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

#ifndef AFC_LAYERS_HPP_
#define AFC_LAYERS_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/poly_activation.hpp"
#include "afc/rational.hpp"
#include "afc/spectral.hpp"
#include "afc/tensor.hpp"

namespace afc::layers {

// ---------------------------------------------------------------------------
// Convolution

/// Kernel (C_out, C_in / groups, kh, kw) plus per-output-channel bias.
/// Convolutions always run at stride 1; downsampling is a separate layer.
struct ConvWeights {
  std::size_t out_channels = 0;
  std::size_t in_per_group = 0;
  std::size_t kh = 0;
  std::size_t kw = 0;
  std::size_t groups = 1;
  std::vector<double> kernel;
  std::vector<double> bias;

  ConvWeights() = default;
  ConvWeights(std::size_t c_out, std::size_t c_in, std::size_t kernel_h,
              std::size_t kernel_w, std::size_t n_groups = 1)
      : out_channels(c_out), kh(kernel_h), kw(kernel_w), groups(n_groups) {
    if (n_groups == 0 || c_out % n_groups != 0 || c_in % n_groups != 0) {
      throw ShapeError("ConvWeights: channels not divisible by groups");
    }
    if (kernel_h == 0 || kernel_w == 0) throw ShapeError("ConvWeights: empty kernel");
    in_per_group = c_in / n_groups;
    kernel.assign(c_out * in_per_group * kh * kw, 0.0);
    bias.assign(c_out, 0.0);
  }

  std::size_t in_channels() const { return in_per_group * groups; }
  std::size_t parameter_count() const { return kernel.size() + bias.size(); }

  double& at(std::size_t o, std::size_t i, std::size_t u, std::size_t v) {
    return kernel[((o * in_per_group + i) * kh + u) * kw + v];
  }
  double at(std::size_t o, std::size_t i, std::size_t u, std::size_t v) const {
    return kernel[((o * in_per_group + i) * kh + u) * kw + v];
  }
};

/// Cross-correlation with circular indexing; the kernel tap (u, v) reads
/// x[(i + u - (kh-1)/2) mod H, (j + v - (kw-1)/2) mod W]. Output has the
/// input's spatial size.
inline Tensor3D circular_conv2d(const Tensor3D& x, const ConvWeights& w) {
  if (x.channels() != w.in_channels()) {
    throw ShapeError("circular_conv2d: input has " + std::to_string(x.channels()) +
                     " channels, kernel expects " + std::to_string(w.in_channels()));
  }
  const std::size_t h = x.height(), wd = x.width();
  const std::size_t out_per_group = w.out_channels / w.groups;
  const std::size_t ph = (w.kh - 1) / 2, pw = (w.kw - 1) / 2;
  Tensor3D y(w.out_channels, h, wd);
  for (std::size_t o = 0; o < w.out_channels; ++o) {
    const std::size_t g = o / out_per_group;
    auto out = y.plane(o);
    for (auto& v : out) v = w.bias[o];
    for (std::size_t ci = 0; ci < w.in_per_group; ++ci) {
      const auto in = x.plane(g * w.in_per_group + ci);
      for (std::size_t u = 0; u < w.kh; ++u) {
        for (std::size_t v = 0; v < w.kw; ++v) {
          const double k = w.at(o, ci, u, v);
          if (k == 0.0) continue;
          // (i + u - ph) mod h, kept non-negative.
          const std::size_t du = (u + h * (ph / h + 1) - ph) % h;
          const std::size_t dv = (v + wd * (pw / wd + 1) - pw) % wd;
          for (std::size_t i = 0; i < h; ++i) {
            const std::size_t si = (i + du) % h;
            const double* src = in.data() + si * wd;
            double* dst = out.data() + i * wd;
            for (std::size_t j = 0; j < wd; ++j) dst[j] += k * src[(j + dv) % wd];
          }
        }
      }
    }
  }
  return y;
}

/// Baseline strided convolution: stride-1 circular convolution followed by
/// plain subsampling (no anti-aliasing).
inline Tensor3D strided_conv2d(const Tensor3D& x, const ConvWeights& w,
                               std::size_t stride) {
  if (x.height() % stride != 0 || x.width() % stride != 0) {
    throw ShapeError("strided_conv2d: spatial size not divisible by stride");
  }
  return spectral::subsample_2d(circular_conv2d(x, w), stride);
}

/// Ideal LPF with cutoff 1/s on both axes, then every s-th row and column.
inline Tensor3D blurpool(const Tensor3D& x, std::size_t stride) {
  if (stride < 2) throw DomainError("blurpool: stride must be >= 2");
  if (x.height() % stride != 0 || x.width() % stride != 0) {
    throw ShapeError("blurpool: " + x.shape_string() + " not divisible by " +
                     std::to_string(stride));
  }
  const Rational cutoff(1, static_cast<std::int64_t>(stride));
  return spectral::subsample_2d(spectral::ideal_lpf_2d(x, cutoff), stride);
}

// ---------------------------------------------------------------------------
// Activations

/// Exact GeLU, x * Phi(x).
inline double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2));
}

inline Tensor3D gelu(const Tensor3D& x) {
  Tensor3D y = x;
  for (auto& v : y.data()) v = gelu(v);
  return y;
}

/// Least-squares fit of a0 + a1 x + a2 x^2 to f on `points` uniform samples
/// of [lo, hi].
inline PolyCoeffs fit_poly2(const std::function<double(double)>& f, double lo,
                            double hi, std::size_t points = 1001) {
  if (points < 3) throw DomainError("fit_poly2: need at least 3 points");
  Eigen::MatrixXd a(points, 3);
  Eigen::VectorXd b(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(points - 1);
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = x;
    a(static_cast<Eigen::Index>(i), 2) = x * x;
    b(static_cast<Eigen::Index>(i)) = f(x);
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1), c(2)};
}

/// GeLU fit on [-sqrt 2, sqrt 2], the initialization for every activation.
inline PolyCoeffs fit_gelu_coeffs() {
  return fit_poly2([](double x) { return gelu(x); }, -std::numbers::sqrt2,
                   std::numbers::sqrt2);
}

inline void require_channels(const Tensor3D& x, const PolyActivation& p,
                             const char* what) {
  if (x.channels() != p.channels()) {
    throw ShapeError(std::string(what) + ": tensor has " +
                     std::to_string(x.channels()) + " channels, activation has " +
                     std::to_string(p.channels()));
  }
}

/// Pointwise c (a0 + a1 c x + a2 c^2 x^2) per channel.
inline Tensor3D poly_eval(const Tensor3D& x, const PolyActivation& p) {
  require_channels(x, p, "poly_eval");
  Tensor3D y = x;
  for (std::size_t c = 0; c < x.channels(); ++c) {
    for (auto& v : y.plane(c)) v = p(c, v);
  }
  return y;
}

struct PolyGrad {
  double g0 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

/// d/d(a0,a1,a2) of sum(upstream * poly_eval(x)), per channel.
inline std::vector<PolyGrad> poly_coeff_gradient(const Tensor3D& x,
                                                 const PolyActivation& p,
                                                 const Tensor3D& upstream) {
  require_channels(x, p, "poly_coeff_gradient");
  require_same_shape(x, upstream, "poly_coeff_gradient");
  const double c = p.scale;
  std::vector<PolyGrad> g(x.channels());
  for (std::size_t ch = 0; ch < x.channels(); ++ch) {
    const auto xs = x.plane(ch);
    const auto us = upstream.plane(ch);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s0 += us[i];
      s1 += us[i] * xs[i];
      s2 += us[i] * xs[i] * xs[i];
    }
    g[ch] = {c * s0, c * c * s1, c * c * c * s2};
  }
  return g;
}

/// Alias-free polynomial activation: upsample x2 per axis, polynomial,
/// ideal LPF at 1/2, downsample x2. Spatial size is preserved.
inline Tensor3D alias_free_poly(const Tensor3D& x, const PolyActivation& p) {
  require_channels(x, p, "alias_free_poly");
  constexpr std::size_t kFactor = PolyActivation::upsample_factor();
  const Tensor3D up = spectral::upsample_2d(x, kFactor);
  const Tensor3D y = poly_eval(up, p);
  const Tensor3D filtered =
      spectral::ideal_lpf_2d(y, Rational(1, static_cast<std::int64_t>(kFactor)));
  return spectral::downsample_2d(filtered, kFactor);
}

/// a0 + a1 x + a2 x * LPF_cutoff(x), with the scale applied as in poly_eval.
/// Bandwidth grows to (1 + cutoff) times the input's, so the result is only
/// alias-free after a following LPF with cutoff <= 1 - cutoff.
inline Tensor3D lpf_poly(const Tensor3D& x, const PolyActivation& p,
                         Rational cutoff = Rational(3, 4)) {
  require_channels(x, p, "lpf_poly");
  if (cutoff.num() <= 0 || cutoff >= Rational(1)) {
    throw DomainError("lpf_poly: cutoff must lie in (0, 1)");
  }
  const Tensor3D low = spectral::ideal_lpf_2d(x, cutoff);
  const double c = p.scale;
  Tensor3D y = x;
  for (std::size_t ch = 0; ch < x.channels(); ++ch) {
    const PolyCoeffs& q = p.coeffs[ch];
    const auto xs = x.plane(ch);
    const auto ls = low.plane(ch);
    auto ys = y.plane(ch);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double cx = c * xs[i];
      ys[i] = c * (q.a0 + q.a1 * cx + q.a2 * cx * (c * ls[i]));
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Normalization

enum class NormMode { kPerPixel, kPerLayerScale };

struct NormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  double eps = 1e-6;
  NormMode mode = NormMode::kPerLayerScale;

  NormParams() = default;
  NormParams(std::size_t channels, NormMode m, double epsilon = 1e-6)
      : gamma(channels, 1.0), beta(channels, 0.0), eps(epsilon), mode(m) {
    if (!(epsilon > 0.0)) throw DomainError("NormParams: eps must be > 0");
  }

  std::size_t channels() const { return gamma.size(); }
  std::size_t parameter_count() const { return gamma.size() + beta.size(); }
};

namespace detail {

inline Tensor3D center_over_channels(const Tensor3D& x) {
  const std::size_t c = x.channels(), hw = x.plane_size();
  std::vector<double> mean(hw, 0.0);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto p = x.plane(ch);
    for (std::size_t i = 0; i < hw; ++i) mean[i] += p[i];
  }
  for (auto& m : mean) m /= static_cast<double>(c);
  Tensor3D y = x;
  for (std::size_t ch = 0; ch < c; ++ch) {
    auto p = y.plane(ch);
    for (std::size_t i = 0; i < hw; ++i) p[i] -= mean[i];
  }
  return y;
}

inline void check_norm(const Tensor3D& x, const NormParams& n, const char* what) {
  if (n.channels() != x.channels() || n.beta.size() != x.channels()) {
    throw ShapeError(std::string(what) + ": parameter/channel mismatch");
  }
}

}  // namespace detail

/// Channel-centering per pixel, then a single standard deviation for the
/// whole layer: sigma = sqrt(mean(centered^2) + eps).
inline Tensor3D af_layernorm(const Tensor3D& x, const NormParams& n) {
  detail::check_norm(x, n, "af_layernorm");
  Tensor3D y = detail::center_over_channels(x);
  double ss = 0.0;
  for (double v : y.data()) ss += v * v;
  const double sigma = std::sqrt(ss / static_cast<double>(y.size()) + n.eps);
  for (std::size_t ch = 0; ch < y.channels(); ++ch) {
    for (auto& v : y.plane(ch)) v = n.gamma[ch] * v / sigma + n.beta[ch];
  }
  return y;
}

/// Standard channels-last LayerNorm: every pixel gets its own mean and scale.
inline Tensor3D layernorm_pixelwise(const Tensor3D& x, const NormParams& n) {
  detail::check_norm(x, n, "layernorm_pixelwise");
  Tensor3D y = detail::center_over_channels(x);
  const std::size_t c = y.channels(), hw = y.plane_size();
  std::vector<double> var(hw, 0.0);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto p = y.plane(ch);
    for (std::size_t i = 0; i < hw; ++i) var[i] += p[i] * p[i];
  }
  for (auto& v : var) v = std::sqrt(v / static_cast<double>(c) + n.eps);
  for (std::size_t ch = 0; ch < c; ++ch) {
    auto p = y.plane(ch);
    for (std::size_t i = 0; i < hw; ++i) p[i] = n.gamma[ch] * p[i] / var[i] + n.beta[ch];
  }
  return y;
}

inline Tensor3D layer_norm(const Tensor3D& x, const NormParams& n) {
  return n.mode == NormMode::kPerPixel ? layernorm_pixelwise(x, n) : af_layernorm(x, n);
}

// ---------------------------------------------------------------------------
// Head

inline std::vector<double> global_avg_pool(const Tensor3D& x) {
  std::vector<double> out(x.channels(), 0.0);
  for (std::size_t c = 0; c < x.channels(); ++c) {
    double s = 0.0;
    for (double v : x.plane(c)) s += v;
    out[c] = s / static_cast<double>(x.plane_size());
  }
  return out;
}

struct Linear {
  std::size_t in = 0;
  std::size_t out = 0;
  std::vector<double> weight;  // (out, in)
  std::vector<double> bias;

  Linear() = default;
  Linear(std::size_t n_in, std::size_t n_out)
      : in(n_in), out(n_out), weight(n_in * n_out, 0.0), bias(n_out, 0.0) {}

  std::size_t parameter_count() const { return weight.size() + bias.size(); }
};

inline std::vector<double> linear_head(std::span<const double> v, const Linear& l) {
  if (v.size() != l.in) throw ShapeError("linear_head: input length mismatch");
  std::vector<double> out(l.bias);
  for (std::size_t o = 0; o < l.out; ++o) {
    for (std::size_t i = 0; i < l.in; ++i) out[o] += l.weight[o * l.in + i] * v[i];
  }
  return out;
}

}  // namespace afc::layers

#endif  // AFC_LAYERS_HPP_
