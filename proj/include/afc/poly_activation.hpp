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

#ifndef AFC_POLY_ACTIVATION_HPP_
#define AFC_POLY_ACTIVATION_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "afc/errors.hpp"

namespace afc {

struct PolyCoeffs {
  double a0 = 0.0;
  double a1 = 1.0;
  double a2 = 0.0;

  friend bool operator==(const PolyCoeffs&, const PolyCoeffs&) = default;
};

/// Degree-2 activation with per-channel coefficients and a global scale c:
/// Poly_c(x) = c * (a0 + a1 (c x) + a2 (c x)^2).
struct PolyActivation {
  static constexpr int kDegree = 2;

  std::vector<PolyCoeffs> coeffs;
  double scale = 7.0;

  PolyActivation() = default;
  PolyActivation(std::vector<PolyCoeffs> per_channel, double c)
      : coeffs(std::move(per_channel)), scale(c) {
    validate();
  }
  PolyActivation(std::size_t channels, PolyCoeffs shared, double c)
      : coeffs(channels, shared), scale(c) {
    validate();
  }

  std::size_t channels() const { return coeffs.size(); }

  /// ceil((d + 1) / 2): the integer resampling factor used by the alias-free
  /// wrapper.
  static constexpr std::size_t upsample_factor() { return (kDegree + 2) / 2; }

  double operator()(std::size_t channel, double x) const {
    const PolyCoeffs& p = coeffs[channel];
    const double cx = scale * x;
    return scale * (p.a0 + p.a1 * cx + p.a2 * cx * cx);
  }

  void validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw DomainError("PolyActivation: scale must be finite and > 0");
    }
    for (const auto& p : coeffs) {
      if (!std::isfinite(p.a0) || !std::isfinite(p.a1) || !std::isfinite(p.a2)) {
        throw DomainError("PolyActivation: non-finite coefficient");
      }
    }
  }
};

}  // namespace afc

#endif  // AFC_POLY_ACTIVATION_HPP_
