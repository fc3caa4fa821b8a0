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

// Builds both network variants, shifts one input by half a pixel and prints
// how far the logits move.

#include <iomanip>
#include <iostream>

#include "afc/afc.hpp"

int main() {
  using namespace afc;
  const RationalShift half{Rational(1, 2), Rational(1, 2)};
  for (auto variant : {network::Variant::kBaseline, network::Variant::kAfc}) {
    network::NetworkSpec spec;
    spec.variant = variant;
    spec.seed = 1;
    const auto net = network::build_network(spec);
    const Tensor3D x = metrics::random_input(spec.input, 42);
    const auto a = network::forward(net, x).logits;
    const auto b = network::forward(net, spectral::fractional_shift_2d(x, half)).logits;
    std::cout << std::setw(8) << network::to_string(variant) << "  max |logit change| = "
              << std::scientific << max_abs_diff(a, b) << "  argmax " << network::argmax(a)
              << " -> " << network::argmax(b) << "\n";
  }
}
