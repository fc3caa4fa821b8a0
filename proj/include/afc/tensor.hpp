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

#ifndef AFC_TENSOR_HPP_
#define AFC_TENSOR_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "afc/errors.hpp"

namespace afc {

/// One period of a periodic, real, uniformly sampled 1-D signal.
using Signal = std::vector<double>;

/// Dense (channels, height, width) feature map, row-major.
class Tensor3D {
 public:
  Tensor3D() = default;
  Tensor3D(std::size_t channels, std::size_t height, std::size_t width,
           double fill = 0.0)
      : c_(channels), h_(height), w_(width),
        data_(channels * height * width, fill) {
    if (channels == 0 || height == 0 || width == 0) {
      throw ShapeError("Tensor3D: all dimensions must be >= 1");
    }
  }
  Tensor3D(std::size_t channels, std::size_t height, std::size_t width,
           std::vector<double> data)
      : c_(channels), h_(height), w_(width), data_(std::move(data)) {
    if (channels == 0 || height == 0 || width == 0) {
      throw ShapeError("Tensor3D: all dimensions must be >= 1");
    }
    if (data_.size() != c_ * h_ * w_) {
      throw ShapeError("Tensor3D: data size does not match shape");
    }
  }

  std::size_t channels() const { return c_; }
  std::size_t height() const { return h_; }
  std::size_t width() const { return w_; }
  std::size_t size() const { return data_.size(); }
  std::size_t plane_size() const { return h_ * w_; }

  double& operator()(std::size_t c, std::size_t i, std::size_t j) {
    return data_[(c * h_ + i) * w_ + j];
  }
  double operator()(std::size_t c, std::size_t i, std::size_t j) const {
    return data_[(c * h_ + i) * w_ + j];
  }

  std::span<double> plane(std::size_t c) {
    return {data_.data() + c * h_ * w_, h_ * w_};
  }
  std::span<const double> plane(std::size_t c) const {
    return {data_.data() + c * h_ * w_, h_ * w_};
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor3D& o) const {
    return c_ == o.c_ && h_ == o.h_ && w_ == o.w_;
  }

  std::string shape_string() const {
    return "(" + std::to_string(c_) + ", " + std::to_string(h_) + ", " +
           std::to_string(w_) + ")";
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Tensor3D&, const Tensor3D&) = default;

 private:
  std::size_t c_ = 0, h_ = 0, w_ = 0;
  std::vector<double> data_;
};

inline void require_same_shape(const Tensor3D& a, const Tensor3D& b,
                               const char* what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": shape mismatch " +
                     a.shape_string() + " vs " + b.shape_string());
  }
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

inline double max_abs_diff(const Tensor3D& a, const Tensor3D& b) {
  require_same_shape(a, b, "max_abs_diff");
  return max_abs_diff(a.data(), b.data());
}

inline Tensor3D operator+(Tensor3D a, const Tensor3D& b) {
  require_same_shape(a, b, "operator+");
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
  return a;
}

}  // namespace afc

#endif  // AFC_TENSOR_HPP_
