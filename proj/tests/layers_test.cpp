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

#include "afc/layers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "afc/metrics.hpp"
#include "afc/oracle.hpp"
#include "afc/spectral.hpp"
#include "test_util.hpp"

namespace afc::layers {
namespace {

using afc::testing::random_tensor;
using spectral::fractional_shift_2d;
using spectral::sanitize_nyquist;

Tensor3D clean_tensor(std::size_t c, std::size_t h, std::size_t w, std::mt19937_64& rng) {
  return sanitize_nyquist(random_tensor(c, h, w, rng));
}

ConvWeights random_conv(std::size_t co, std::size_t ci, std::size_t k, std::size_t groups,
                        std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ConvWeights w(co, ci, k, k, groups);
  for (auto& v : w.kernel) v = normal(rng);
  for (auto& v : w.bias) v = normal(rng);
  return w;
}

// ---------------------------------------------------------------------------
// circular_conv2d

TEST(CircularConv, UnitPointwiseIsIdentity) {
  std::mt19937_64 rng(1);
  const Tensor3D x = random_tensor(3, 5, 6, rng);
  ConvWeights w(3, 3, 1, 1);
  for (std::size_t c = 0; c < 3; ++c) w.at(c, c, 0, 0) = 1.0;
  EXPECT_EQ(circular_conv2d(x, w), x);
}

TEST(CircularConv, ImpulseResponseIsFlippedKernel) {
  std::mt19937_64 rng(2);
  ConvWeights w = random_conv(1, 1, 3, 1, rng);
  w.bias[0] = 0.0;
  Tensor3D delta(1, 6, 6);
  delta(0, 0, 0) = 1.0;
  const Tensor3D y = circular_conv2d(delta, w);
  // Tap (u, v) reads x[i + u - 1, j + v - 1], so the impulse lands at (1 - u, 1 - v).
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t v = 0; v < 3; ++v)
      EXPECT_DOUBLE_EQ(y(0, (7 - u) % 6, (7 - v) % 6), w.at(0, 0, u, v));
}

TEST(CircularConv, IntegerRollEquivarianceIsExact) {
  std::mt19937_64 rng(3);
  const Tensor3D x = random_tensor(4, 8, 8, rng);
  const ConvWeights w = random_conv(4, 4, 7, 4, rng);
  const Tensor3D a = circular_conv2d(spectral::roll_2d(x, 3, -2), w);
  const Tensor3D b = spectral::roll_2d(circular_conv2d(x, w), 3, -2);
  EXPECT_EQ(a, b);
}

TEST(CircularConv, KernelLargerThanMapWraps) {
  // 7x7 depthwise on a 4x4 map: every tap wraps modulo 4. Compare with the
  // equivalent 4x4-folded kernel.
  std::mt19937_64 rng(4);
  const Tensor3D x = random_tensor(1, 4, 4, rng);
  ConvWeights big = random_conv(1, 1, 7, 1, rng);
  big.bias[0] = 0.0;
  Tensor3D want(1, 4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double acc = 0.0;
      for (int u = 0; u < 7; ++u)
        for (int v = 0; v < 7; ++v) {
          const int si = ((static_cast<int>(i) + u - 3) % 4 + 4) % 4;
          const int sj = ((static_cast<int>(j) + v - 3) % 4 + 4) % 4;
          acc += big.at(0, 0, u, v) * x(0, si, sj);
        }
      want(0, i, j) = acc;
    }
  EXPECT_LT(max_abs_diff(circular_conv2d(x, big), want), 1e-12);
}

TEST(CircularConv, FractionalShiftEquivariance) {
  std::mt19937_64 rng(5);
  const Tensor3D x = clean_tensor(3, 8, 8, rng);
  const ConvWeights w = random_conv(5, 3, 4, 1, rng);
  const RationalShift d{Rational(1, 2), Rational(-1, 3)};
  EXPECT_LT(max_abs_diff(circular_conv2d(fractional_shift_2d(x, d), w),
                         fractional_shift_2d(circular_conv2d(x, w), d)),
            1e-9);
}

TEST(CircularConv, ShapeErrors) {
  EXPECT_THROW(ConvWeights(3, 4, 3, 3, 2), ShapeError);
  std::mt19937_64 rng(6);
  const ConvWeights w = random_conv(2, 3, 1, 1, rng);
  EXPECT_THROW(circular_conv2d(Tensor3D(2, 4, 4), w), ShapeError);
}

// ---------------------------------------------------------------------------
// blurpool

TEST(BlurPool, ConstantStaysConstant) {
  const Tensor3D y = blurpool(Tensor3D(2, 8, 8, 1.5), 2);
  EXPECT_EQ(y.height(), 4u);
  for (double v : y.data()) EXPECT_NEAR(v, 1.5, 1e-12);
}

TEST(BlurPool, HighHorizontalCosineRemoved) {
  Tensor3D x(1, 8, 16);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 16; ++j) x(0, i, j) = std::cos(2 * std::numbers::pi * 5 * j / 16.0);
  const Tensor3D y = blurpool(x, 2);
  for (double v : y.data()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(BlurPool, RejectsIndivisible) {
  EXPECT_THROW(blurpool(Tensor3D(1, 6, 6), 4), ShapeError);
  EXPECT_THROW(blurpool(Tensor3D(1, 6, 6), 1), DomainError);
}

// Shift applied with the periodic-sinc oracle, axis by axis.
Tensor3D oracle_shift_2d(const Tensor3D& t, double dy, double dx) {
  Tensor3D r = spectral::apply_rows(t, [&](std::span<const double> x) { return oracle::oracle_shift(x, dx); });
  return spectral::apply_cols(r, [&](std::span<const double> x) { return oracle::oracle_shift(x, dy); });
}

TEST(BlurPool, EquivariantWithShiftRescaling) {
  std::mt19937_64 rng(7);
  for (std::size_t s : {2u, 4u}) {
    const Tensor3D x = clean_tensor(2, 16, 16, rng);
    for (auto [a, b] : {std::pair{Rational(1, 4), Rational(1, 2)}, std::pair{Rational(1, 3), Rational(-1, 8)}}) {
      const RationalShift small{a, b};
      const Tensor3D lhs = blurpool(fractional_shift_2d(x, small.scaled(Rational(static_cast<std::int64_t>(s)))), s);
      const Tensor3D pooled = blurpool(x, s);
      EXPECT_LT(max_abs_diff(lhs, fractional_shift_2d(pooled, small)), 1e-8);
      EXPECT_LT(max_abs_diff(lhs, oracle_shift_2d(pooled, a.value(), b.value())), 1e-8);
    }
  }
}

// ---------------------------------------------------------------------------
// activations

TEST(Gelu, KnownValues) {
  EXPECT_EQ(gelu(0.0), 0.0);
  EXPECT_NEAR(gelu(-10.0), 0.0, 1e-6);
  EXPECT_NEAR(gelu(1.0), 0.8413447460685429, 1e-12);
  EXPECT_NEAR(gelu(20.0), 20.0, 1e-12);
}

TEST(FitGelu, FrozenCoefficients) {
  // Least-squares reference computed independently (numpy lstsq, scipy erf).
  const PolyCoeffs p = fit_gelu_coeffs();
  EXPECT_NEAR(p.a0, 0.01671267, 1e-7);
  EXPECT_NEAR(p.a1, 0.5, 1e-7);
  EXPECT_NEAR(p.a2, 0.30840116, 1e-7);
  EXPECT_GT(p.a1, 0.0);
  EXPECT_LT(p.a1, 1.0);
  EXPECT_GT(p.a2, 0.0);
}

TEST(FitGelu, MaxErrorOnFitRange) {
  const PolyCoeffs p = fit_gelu_coeffs();
  double worst = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double x = -std::numbers::sqrt2 + 2 * std::numbers::sqrt2 * i / 100000.0;
    worst = std::max(worst, std::abs(p.a0 + p.a1 * x + p.a2 * x * x - gelu(x)));
  }
  EXPECT_LT(worst, 0.06);
}

TEST(FitGelu, IdentityIsExactlyRepresentable) {
  const PolyCoeffs p = fit_poly2([](double x) { return x; }, -std::numbers::sqrt2, std::numbers::sqrt2);
  EXPECT_NEAR(p.a0, 0.0, 1e-10);
  EXPECT_NEAR(p.a1, 1.0, 1e-10);
  EXPECT_NEAR(p.a2, 0.0, 1e-10);
}

TEST(PolyEval, Examples) {
  Tensor3D x(1, 1, 1, 2.0);
  EXPECT_DOUBLE_EQ(poly_eval(x, PolyActivation(1, {1, 1, 1}, 1.0))(0, 0, 0), 7.0);
  x(0, 0, 0) = 1.0;
  EXPECT_DOUBLE_EQ(poly_eval(x, PolyActivation(1, {0, 1, 0}, 7.0))(0, 0, 0), 49.0);
  std::mt19937_64 rng(8);
  const Tensor3D r = random_tensor(2, 3, 3, rng);
  EXPECT_EQ(poly_eval(r, PolyActivation(2, {0, 1, 0}, 1.0)), r);
  EXPECT_THROW(poly_eval(r, PolyActivation(3, {0, 1, 0}, 1.0)), ShapeError);
}

TEST(PolyActivationType, Validation) {
  EXPECT_THROW(PolyActivation(1, {0, 1, 0}, 0.0), DomainError);
  EXPECT_THROW(PolyActivation(1, {NAN, 1, 0}, 1.0), DomainError);
  EXPECT_EQ(PolyActivation::upsample_factor(), 2u);
}

TEST(PolyGradient, Examples) {
  const Tensor3D x(1, 1, 1, 1.0);
  const PolyActivation p(1, {0.3, 0.2, 0.1}, 1.0);
  auto g = poly_coeff_gradient(x, p, Tensor3D(1, 1, 1, 0.0));
  EXPECT_EQ(g[0].g0, 0.0);
  EXPECT_EQ(g[0].g1, 0.0);
  EXPECT_EQ(g[0].g2, 0.0);
  g = poly_coeff_gradient(x, p, Tensor3D(1, 1, 1, 1.0));
  EXPECT_EQ(g[0].g0, 1.0);
  EXPECT_EQ(g[0].g1, 1.0);
  EXPECT_EQ(g[0].g2, 1.0);
  EXPECT_THROW(poly_coeff_gradient(x, p, Tensor3D(1, 2, 1)), ShapeError);
}

TEST(PolyGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (double scale : {1.0, 7.0}) {
    const Tensor3D x = random_tensor(3, 4, 5, rng);
    const Tensor3D up = random_tensor(3, 4, 5, rng);
    std::vector<PolyCoeffs> cs(3);
    for (auto& c : cs) c = {normal(rng), normal(rng), normal(rng)};
    const PolyActivation p(cs, scale);
    const auto g = poly_coeff_gradient(x, p, up);
    auto loss = [&](const PolyActivation& q) {
      const Tensor3D y = poly_eval(x, q);
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += up.data()[i] * y.data()[i];
      return s;
    };
    const double h = 1e-5;
    for (std::size_t c = 0; c < 3; ++c) {
      for (int k = 0; k < 3; ++k) {
        PolyActivation a = p, b = p;
        double PolyCoeffs::*field = k == 0 ? &PolyCoeffs::a0 : k == 1 ? &PolyCoeffs::a1 : &PolyCoeffs::a2;
        a.coeffs[c].*field += h;
        b.coeffs[c].*field -= h;
        const double fd = (loss(a) - loss(b)) / (2 * h);
        const double an = k == 0 ? g[c].g0 : k == 1 ? g[c].g1 : g[c].g2;
        EXPECT_LT(std::abs(fd - an) / std::max(std::abs(an), 1e-12), 1e-6);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// alias-free polynomial

TEST(AliasFreePoly, LinearPolynomialIsTransparentOnCleanInputs) {
  std::mt19937_64 rng(10);
  const Tensor3D x = clean_tensor(2, 8, 12, rng);
  EXPECT_LT(max_abs_diff(alias_free_poly(x, PolyActivation(2, {0, 1, 0}, 1.0)), x), 1e-9);
  // Odd sizes have no Nyquist bin, so any input passes through.
  const Tensor3D odd = random_tensor(1, 5, 7, rng);
  EXPECT_LT(max_abs_diff(alias_free_poly(odd, PolyActivation(1, {0, 1, 0}, 1.0)), odd), 1e-9);
}

TEST(AliasFreePoly, ConstantInput) {
  const PolyActivation p(1, {0.2, -0.5, 0.4}, 7.0);
  const Tensor3D y = alias_free_poly(Tensor3D(1, 6, 6, 0.3), p);
  for (double v : y.data()) EXPECT_NEAR(v, p(0, 0.3), 1e-10);
}

TEST(AliasFreePoly, MatchesContinuousDomainOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 3; ++t) {
    const Tensor3D x = random_tensor(1, 16, 16, rng);
    const PolyActivation p(1, {normal(rng), normal(rng), normal(rng)}, t == 0 ? 7.0 : 1.0);
    EXPECT_LT(max_abs_diff(alias_free_poly(x, p), oracle::oracle_alias_free_poly_2d(x, p)), 1e-8);
  }
}

TEST(AliasFreePoly, ShiftEquivariant) {
  std::mt19937_64 rng(12);
  const Tensor3D x = clean_tensor(2, 8, 8, rng);
  const PolyActivation p(2, fit_gelu_coeffs(), 7.0);
  for (RationalShift d : {RationalShift{Rational(1, 2), Rational(1, 2)},
                          RationalShift{Rational(-1, 3), Rational(5, 8)}}) {
    EXPECT_LT(max_abs_diff(alias_free_poly(fractional_shift_2d(x, d), p),
                           fractional_shift_2d(alias_free_poly(x, p), d)),
              1e-9);
  }
}

TEST(LpfPoly, AffineWhenQuadraticTermVanishes) {
  std::mt19937_64 rng(13);
  const Tensor3D x = random_tensor(1, 8, 8, rng);
  const PolyActivation p(1, {0.5, -2.0, 0.0}, 1.0);
  const Tensor3D a = lpf_poly(x, p, Rational(3, 4));
  const Tensor3D b = lpf_poly(x, p, Rational(1, 4));
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(a.data()[i], 0.5 - 2.0 * x.data()[i], 1e-12);
  EXPECT_LT(max_abs_diff(a, b), 1e-12);
}

TEST(LpfPoly, ConstantInput) {
  const PolyActivation p(1, {0.1, 0.2, 0.3}, 1.0);
  const Tensor3D y = lpf_poly(Tensor3D(1, 8, 8, 2.0), p);
  for (double v : y.data()) EXPECT_NEAR(v, 0.1 + 0.4 + 1.2, 1e-12);
}

TEST(LpfPoly, RejectsBadCutoff) {
  const PolyActivation p(1, {0, 1, 0}, 1.0);
  EXPECT_THROW(lpf_poly(Tensor3D(1, 4, 4), p, Rational(1)), DomainError);
  EXPECT_THROW(lpf_poly(Tensor3D(1, 4, 4), p, Rational(0)), DomainError);
}

TEST(LpfPoly, EquivariantAfterStrideFourBlurPool) {
  std::mt19937_64 rng(14);
  const Tensor3D x = clean_tensor(2, 32, 32, rng);
  const PolyActivation p(2, fit_gelu_coeffs(), 7.0);
  auto stem = [&](const Tensor3D& t) { return blurpool(lpf_poly(t, p), 4); };
  for (RationalShift d : {RationalShift{Rational(1, 2), Rational(1, 2)},
                          RationalShift{Rational(1), Rational(-3, 2)},
                          RationalShift{Rational(4, 3), Rational(1, 4)}}) {
    EXPECT_LT(max_abs_diff(stem(fractional_shift_2d(x, d)),
                           fractional_shift_2d(stem(x), d.scaled(Rational(1, 4)))),
              1e-8);
  }
}

TEST(LpfPoly, PlainSquareBeforeBlurPoolAliases) {
  // Without the inner LPF the product reaches twice the band and folds into
  // the pass band of the BlurPool.
  std::mt19937_64 rng(15);
  const Tensor3D x = clean_tensor(1, 32, 32, rng);
  const PolyActivation p(1, fit_gelu_coeffs(), 7.0);
  auto stem = [&](const Tensor3D& t) { return blurpool(poly_eval(t, p), 4); };
  const RationalShift d{Rational(1, 2), Rational(1, 2)};
  EXPECT_GT(max_abs_diff(stem(fractional_shift_2d(x, d)),
                         fractional_shift_2d(stem(x), d.scaled(Rational(1, 4)))),
            1e-3);
}

TEST(GeluControl, BreaksHalfPixelEquivariance) {
  std::mt19937_64 rng(16);
  const RationalShift d{Rational(1, 2), Rational(1, 2)};
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const Tensor3D x = clean_tensor(1, 8, 8, rng);
    const double diff = metrics::layer_diff(gelu(fractional_shift_2d(x, d)),
                                            fractional_shift_2d(gelu(x), d));
    violations += diff >= 1e-3;
  }
  EXPECT_GE(violations, 95);
}

// ---------------------------------------------------------------------------
// normalization

TEST(AfLayerNorm, ChannelConstantPixelsGiveBeta) {
  NormParams n(3, NormMode::kPerLayerScale);
  n.beta = {0.5, -1.0, 2.0};
  Tensor3D x(3, 4, 4);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const double v = normal(rng);
      for (std::size_t c = 0; c < 3; ++c) x(c, i, j) = v;
    }
  const Tensor3D y = af_layernorm(x, n);
  for (std::size_t c = 0; c < 3; ++c)
    for (double v : y.plane(c)) EXPECT_NEAR(v, n.beta[c], 1e-12);
}

TEST(AfLayerNorm, UnitLayerStdReturnsCentered) {
  // Two channels +-a around zero per pixel: centered values are +-a with
  // mean square 1 when a^2 averages to 1.
  Tensor3D x(2, 1, 2);
  x(0, 0, 0) = 1.0;  x(1, 0, 0) = -1.0;
  x(0, 0, 1) = -1.0; x(1, 0, 1) = 1.0;
  NormParams n(2, NormMode::kPerLayerScale, 1e-300);
  const Tensor3D y = af_layernorm(x, n);
  EXPECT_LT(max_abs_diff(y, x), 1e-12);
}

TEST(AfLayerNorm, FractionalShiftEquivariant) {
  std::mt19937_64 rng(18);
  const Tensor3D x = clean_tensor(4, 8, 8, rng);
  NormParams n(4, NormMode::kPerLayerScale);
  n.gamma = {1.0, 0.5, 2.0, -1.0};
  n.beta = {0.1, 0.0, -0.3, 1.0};
  for (RationalShift d : {RationalShift{Rational(1, 2), Rational(1, 2)},
                          RationalShift{Rational(1, 3), Rational(-2, 5)}}) {
    EXPECT_LT(max_abs_diff(af_layernorm(fractional_shift_2d(x, d), n),
                           fractional_shift_2d(af_layernorm(x, n), d)),
              1e-8);
  }
}

TEST(PixelLayerNorm, SingleChannelGivesBeta) {
  std::mt19937_64 rng(19);
  NormParams n(1, NormMode::kPerPixel);
  n.beta = {0.7};
  const Tensor3D y = layernorm_pixelwise(random_tensor(1, 4, 4, rng), n);
  for (double v : y.data()) EXPECT_NEAR(v, 0.7, 1e-12);
}

TEST(PixelLayerNorm, IntegerShiftExactHalfPixelBroken) {
  std::mt19937_64 rng(20);
  NormParams n(4, NormMode::kPerPixel);
  const RationalShift half{Rational(1, 2), Rational(1, 2)};
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    const Tensor3D x = clean_tensor(4, 8, 8, rng);
    if (t == 0) {
      EXPECT_EQ(layernorm_pixelwise(spectral::roll_2d(x, 1, 2), n),
                spectral::roll_2d(layernorm_pixelwise(x, n), 1, 2));
    }
    const double diff = metrics::layer_diff(layernorm_pixelwise(fractional_shift_2d(x, half), n),
                                            fractional_shift_2d(layernorm_pixelwise(x, n), half));
    violations += diff > 1e-3;
  }
  EXPECT_GE(violations, 95);
}

TEST(NormParamsType, RejectsNonPositiveEps) {
  EXPECT_THROW(NormParams(2, NormMode::kPerPixel, 0.0), DomainError);
  EXPECT_THROW(af_layernorm(Tensor3D(3, 2, 2), NormParams(2, NormMode::kPerLayerScale)), ShapeError);
}

// ---------------------------------------------------------------------------
// head

TEST(GlobalAvgPool, ConstantAndShifts) {
  Tensor3D x(2, 4, 4);
  for (auto& v : x.plane(0)) v = 3.0;
  for (auto& v : x.plane(1)) v = -1.0;
  EXPECT_EQ(global_avg_pool(x), (std::vector<double>{3.0, -1.0}));

  std::mt19937_64 rng(21);
  const Tensor3D r = clean_tensor(3, 8, 8, rng);
  const auto base = global_avg_pool(r);
  const auto rolled = global_avg_pool(spectral::roll_2d(r, 3, 5));
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(rolled[c], base[c], 1e-14);
  const auto shifted = global_avg_pool(fractional_shift_2d(r, {Rational(1, 2), Rational(2, 7)}));
  EXPECT_LT(max_abs_diff(shifted, base), 1e-9);
}

TEST(LinearHead, Affine) {
  Linear l(2, 3);
  l.weight = {1, 0, 0, 1, 1, 1};
  l.bias = {0.5, 0, -1};
  EXPECT_EQ(linear_head(std::vector<double>{2, 3}, l), (std::vector<double>{2.5, 3, 4}));
  EXPECT_THROW(linear_head(std::vector<double>{1}, l), ShapeError);
}

}  // namespace
}  // namespace afc::layers
