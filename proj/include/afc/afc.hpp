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

#ifndef AFC_AFC_HPP_
#define AFC_AFC_HPP_

#include "afc/errors.hpp"
#include "afc/fft.hpp"
#include "afc/io.hpp"
#include "afc/layers.hpp"
#include "afc/metrics.hpp"
#include "afc/network.hpp"
#include "afc/oracle.hpp"
#include "afc/poly_activation.hpp"
#include "afc/rational.hpp"
#include "afc/spectral.hpp"
#include "afc/tensor.hpp"

#endif  // AFC_AFC_HPP_
