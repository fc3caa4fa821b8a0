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

#ifndef AFC_TESTS_TEST_UTIL_HPP_
#define AFC_TESTS_TEST_UTIL_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "afc/spectral.hpp"
#include "afc/tensor.hpp"

namespace afc::testing {

inline Signal random_signal(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

/// Zeroes the even-length Nyquist bin.
inline Signal nyquist_clean(const Signal& x) {
  return spectral::ideal_lpf_1d(x, Rational(1));
}

inline Tensor3D random_tensor(std::size_t c, std::size_t h, std::size_t w,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor3D t(c, h, w);
  for (auto& v : t.data()) v = normal(rng);
  return t;
}

inline double norm2(const Signal& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace afc::testing

#endif  // AFC_TESTS_TEST_UTIL_HPP_
