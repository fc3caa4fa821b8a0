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

#ifndef AFC_ERRORS_HPP_
#define AFC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace afc {

// Argument outside the mathematical domain of an operation (bad cutoff,
// resampling factor < 2, empty sample list, ...).
using DomainError = std::domain_error;

// Incompatible tensor / signal shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid network or experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace afc

#endif  // AFC_ERRORS_HPP_
