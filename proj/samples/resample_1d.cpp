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

// Band-limited resampling of a short signal: upsample, fractional shift and
// the round trip back.

#include <iomanip>
#include <iostream>

#include "afc/spectral.hpp"

namespace {

void print(const char* label, const afc::Signal& s) {
  std::cout << std::setw(12) << label << ":";
  for (double v : s) std::cout << " " << std::setw(8) << std::fixed << std::setprecision(4) << v;
  std::cout << "\n";
}

}  // namespace

int main() {
  const afc::Signal x{1.0, 0.5, -0.25, 0.0, 0.75, -1.0, 0.25, 0.5};
  print("x", x);
  const afc::Signal up = afc::spectral::upsample_1d(x, 2);
  print("upsample x2", up);
  print("shift 1/2", afc::spectral::fractional_shift_1d(x, afc::Rational(1, 2)));
  print("shift 1/3", afc::spectral::fractional_shift_1d(x, afc::Rational(1, 3)));
  print("round trip", afc::spectral::downsample_1d(up, 2));
  print("lpf 1/2", afc::spectral::ideal_lpf_1d(x, afc::Rational(1, 2)));
}
