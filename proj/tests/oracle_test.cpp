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

#include "afc/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "afc/fft.hpp"
#include "afc/layers.hpp"
#include "afc/spectral.hpp"
#include "test_util.hpp"

namespace afc::oracle {
namespace {

using afc::testing::nyquist_clean;
using afc::testing::random_signal;

TEST(NaiveDft, DeltaAndConstant) {
  const auto d = naive_dft(std::vector<double>{1, 0, 0, 0});
  for (const auto& v : d) EXPECT_NEAR(std::abs(v - Complex(1, 0)), 0.0, 1e-15);
  const auto c = naive_dft(std::vector<double>{1, 1, 1, 1});
  EXPECT_NEAR(std::abs(c[0] - Complex(4, 0)), 0.0, 1e-14);
  for (std::size_t k = 1; k < 4; ++k) EXPECT_NEAR(std::abs(c[k]), 0.0, 1e-14);
}

TEST(NaiveDft, InverseRoundTripAndFftAgreement) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (std::size_t n : {1u, 2u, 7u, 16u, 30u}) {
    ComplexVector x(n);
    for (auto& v : x) v = {normal(rng), normal(rng)};
    const auto back = naive_idft(naive_dft(x));
    const auto fast = fft::forward(x);
    const auto slow = naive_dft(x);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LT(std::abs(back[i] - x[i]), 1e-10);
      EXPECT_LT(std::abs(fast[i] - slow[i]), 1e-10);
    }
  }
}

TEST(SincReconstruct, ConstantAndCosine) {
  EXPECT_NEAR(sinc_reconstruct(std::vector<double>(5, 2.0), 1.37), 2.0, 1e-12);
  const std::size_t n = 8;
  Signal x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2 * std::numbers::pi * i / n);
  EXPECT_NEAR(sinc_reconstruct(x, 0.5), std::cos(2 * std::numbers::pi * 0.5 / n), 1e-12);
}

TEST(SincReconstruct, InterpolatesGridPoints) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 2u, 3u, 8u, 15u}) {
    const Signal x = random_signal(n, rng);
    const ContinuousSampler s(x);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(s(static_cast<double>(i)), x[i], 1e-10);
    EXPECT_NEAR(s(static_cast<double>(n) + 0.3), s(0.3), 1e-10);  // periodic
  }
}

TEST(SincReconstruct, QuarterPointMatchesUpsampleByFour) {
  std::mt19937_64 rng(3);
  const Signal x = nyquist_clean(random_signal(8, rng));
  EXPECT_NEAR(sinc_reconstruct(x, 0.25), spectral::upsample_1d(x, 4)[1], 1e-10);
}

TEST(OracleShift, IdentityAndRoll) {
  std::mt19937_64 rng(4);
  const Signal x = random_signal(6, rng);
  EXPECT_LT(max_abs_diff(oracle_shift(x, 0.0), x), 1e-12);
  EXPECT_LT(max_abs_diff(oracle_shift(x, 1.0), spectral::roll_1d(x, 1)), 1e-12);
}

TEST(OracleShift, SelfInverseOnCleanInputs) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {4u, 7u, 16u}) {
    const Signal x = nyquist_clean(random_signal(n, rng));
    for (double d : {0.5, 0.3, -1.7}) {
      EXPECT_LT(max_abs_diff(oracle_shift(oracle_shift(x, d), -d), x), 1e-9);
    }
  }
}

TEST(OracleShift, AgreesWithSpectralShift) {
  std::mt19937_64 rng(6);
  const Signal x = nyquist_clean(random_signal(16, rng));
  for (Rational d : {Rational(1, 2), Rational(3, 5), Rational(-7, 3)}) {
    EXPECT_LT(max_abs_diff(oracle_shift(x, d.value()), spectral::fractional_shift_1d(x, d)), 1e-9);
  }
}

TEST(OracleAliasFreePoly, IdentityPolynomialIsTransparent) {
  std::mt19937_64 rng(7);
  const Signal x = nyquist_clean(random_signal(16, rng));
  EXPECT_LT(max_abs_diff(oracle_alias_free_poly(x, {0, 1, 0}, 1.0), x), 1e-9);
}

TEST(OracleAliasFreePoly, ConstantInput) {
  const PolyCoeffs p{0.3, -0.2, 0.7};
  const double v = 1.5;
  const Signal y = oracle_alias_free_poly(Signal(10, v), p, 1.0);
  for (double o : y) EXPECT_NEAR(o, p.a0 + p.a1 * v + p.a2 * v * v, 1e-10);
}

TEST(OracleAliasFreePoly, ConvergedInOversampling) {
  std::mt19937_64 rng(8);
  const Signal x = random_signal(16, rng);
  const PolyCoeffs p{0.1, 0.5, 0.3};
  const Signal y8 = oracle_alias_free_poly(x, p, 1.0, 8);
  const Signal y32 = oracle_alias_free_poly(x, p, 1.0, 32);
  EXPECT_LT(max_abs_diff(y8, y32), 1e-9);
}

TEST(OracleAliasFreePoly, RejectsTooSmallOversampling) {
  EXPECT_THROW(oracle_alias_free_poly(Signal(4, 1.0), {}, 1.0, 1), ConfigError);
}

TEST(OracleAliasFreePoly, Oracle2dReducesTo1dOnRowConstantImages) {
  // An image constant along columns is a 1-D signal per row direction.
  std::mt19937_64 rng(9);
  const Signal x = random_signal(8, rng);
  Tensor3D t(1, 4, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 8; ++j) t(0, i, j) = x[j];
  const PolyActivation p(1, {0.2, 0.4, 0.3}, 1.0);
  const Tensor3D y = oracle_alias_free_poly_2d(t, p, 4);
  const Signal y1 = oracle_alias_free_poly(x, p.coeffs[0], 1.0, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 8; ++j) EXPECT_NEAR(y(0, i, j), y1[j], 1e-10);
}

}  // namespace
}  // namespace afc::oracle
