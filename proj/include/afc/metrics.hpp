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

#ifndef AFC_METRICS_HPP_
#define AFC_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "afc/errors.hpp"
#include "afc/network.hpp"
#include "afc/rational.hpp"
#include "afc/spectral.hpp"
#include "afc/tensor.hpp"

namespace afc::metrics {

/// Runs fn(i) for i in [0, n) on a few threads; results come back in index
/// order so aggregation is deterministic.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn,
                            std::size_t threads = 0) {
  std::vector<T> out(n);
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads) out[i] = fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Seeded standard-normal image, Nyquist-sanitized with a cutoff-1 LPF.
inline Tensor3D random_input(const network::InputShape& shape, std::uint64_t seed,
                             bool sanitize = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor3D t(shape.channels, shape.height, shape.width);
  for (auto& v : t.data()) v = normal(rng);
  return sanitize ? spectral::sanitize_nyquist(t) : t;
}

/// Mean over elements of |y0 - y1| / (max(|y0|, |y1|) + eps).
inline double layer_diff(const Tensor3D& y0, const Tensor3D& y1, double eps = 1e-9) {
  require_same_shape(y0, y1, "layer_diff");
  double acc = 0.0;
  const auto& a = y0.data();
  const auto& b = y1.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::abs(a[i] - b[i]) / (std::max(std::abs(a[i]), std::abs(b[i])) + eps);
  }
  return acc / static_cast<double>(a.size());
}

struct LayerDiff {
  std::string layer;
  std::size_t cumulative_stride = 1;
  double diff = 0.0;
};

struct EquivarianceReport {
  std::vector<LayerDiff> layers;
  RationalShift shift;
  std::size_t samples = 0;

  double max_diff() const {
    double m = 0.0;
    for (const auto& l : layers) m = std::max(m, l.diff);
    return m;
  }
};

/// Forwards x and shift(x), brings every tap pair back to input resolution
/// with exact upsampling, shifts the reference tap by delta there, and
/// measures layer_diff.
inline EquivarianceReport equivariance_report(const network::Network& net, const Tensor3D& x,
                                              const RationalShift& delta) {
  const auto ref = network::forward(net, x, true);
  const auto moved = network::forward(net, spectral::fractional_shift_2d(x, delta), true);
  EquivarianceReport rep;
  rep.shift = delta;
  rep.samples = 1;
  for (std::size_t i = 0; i < ref.taps.size(); ++i) {
    const auto& t0 = ref.taps[i];
    const auto& t1 = moved.taps[i];
    const Tensor3D y0 = spectral::fractional_shift_2d(
        spectral::upsample_2d(t0.output, t0.cumulative_stride), delta);
    const Tensor3D y1 = spectral::upsample_2d(t1.output, t1.cumulative_stride);
    rep.layers.push_back({t0.name, t0.cumulative_stride, layer_diff(y0, y1)});
  }
  return rep;
}

/// Per-layer mean of equivariance_report over many inputs.
inline EquivarianceReport mean_equivariance_report(const network::Network& net,
                                                   const std::vector<Tensor3D>& inputs,
                                                   const RationalShift& delta) {
  if (inputs.empty()) throw DomainError("mean_equivariance_report: no inputs");
  const auto reports = parallel_map<EquivarianceReport>(
      inputs.size(), [&](std::size_t i) { return equivariance_report(net, inputs[i], delta); });
  EquivarianceReport out = reports.front();
  for (std::size_t r = 1; r < reports.size(); ++r) {
    for (std::size_t l = 0; l < out.layers.size(); ++l) {
      out.layers[l].diff += reports[r].layers[l].diff;
    }
  }
  for (auto& l : out.layers) l.diff /= static_cast<double>(reports.size());
  out.samples = reports.size();
  return out;
}

// ---------------------------------------------------------------------------
// Translation grids

enum class GridKind { kInteger, kHalf, kFractional };

struct ShiftGrid {
  GridKind kind = GridKind::kInteger;
  std::size_t bound = 1;  // B for integer/half grids, k for fractional
  std::vector<RationalShift> shifts;

  std::string label() const {
    switch (kind) {
      case GridKind::kInteger: return "integer:" + std::to_string(bound);
      case GridKind::kHalf: return "half:" + std::to_string(bound);
      case GridKind::kFractional: return "frac:" + std::to_string(bound);
    }
    return "?";
  }
};

/// Enumerates a translation grid, rational-reduced and deduplicated, (0,0)
/// excluded. integer: (i, j), half: (i/2, j/2), both with 1 <= i, j <= B;
/// fractional: (m1/n1, m2/n2) with 1 <= m <= n <= k.
inline ShiftGrid make_grid(GridKind kind, std::size_t bound) {
  if (bound < 1) throw DomainError("make_grid: bound must be >= 1");
  std::set<Rational> axis;
  const auto b = static_cast<std::int64_t>(bound);
  switch (kind) {
    case GridKind::kInteger:
      for (std::int64_t i = 1; i <= b; ++i) axis.insert(Rational(i));
      break;
    case GridKind::kHalf:
      for (std::int64_t i = 1; i <= b; ++i) axis.insert(Rational(i, 2));
      break;
    case GridKind::kFractional:
      for (std::int64_t n = 1; n <= b; ++n) {
        for (std::int64_t m = 1; m <= n; ++m) axis.insert(Rational(m, n));
      }
      break;
  }
  std::set<RationalShift> uniq;
  for (const auto& dy : axis) {
    for (const auto& dx : axis) {
      RationalShift s{dy, dx};
      if (!s.is_zero()) uniq.insert(s);
    }
  }
  return {kind, bound, std::vector<RationalShift>(uniq.begin(), uniq.end())};
}

/// Parses "integer:B", "half:B" or "frac:k".
inline ShiftGrid parse_grid(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("bad grid '" + s + "'");
  const std::string kind = s.substr(0, colon);
  std::size_t bound = 0;
  try {
    bound = std::stoul(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad grid bound in '" + s + "'");
  }
  if (bound < 1) throw ConfigError("grid bound must be >= 1 in '" + s + "'");
  if (kind == "integer") return make_grid(GridKind::kInteger, bound);
  if (kind == "half") return make_grid(GridKind::kHalf, bound);
  if (kind == "frac") return make_grid(GridKind::kFractional, bound);
  throw ConfigError("unknown grid kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Consistency and adversarial accuracy

struct ConsistencyResult {
  double fraction = 0.0;
  double max_logit_deviation = 0.0;
  std::size_t samples = 0;
};

/// Fraction of inputs whose predicted class survives the paired shift
/// (shifts[i] applies to inputs[i]).
inline ConsistencyResult consistency(const network::Network& net,
                                     const std::vector<Tensor3D>& inputs,
                                     const std::vector<RationalShift>& shifts) {
  if (inputs.empty()) throw DomainError("consistency: empty input list");
  if (shifts.size() != inputs.size()) {
    throw ShapeError("consistency: need one shift per input");
  }
  struct Item {
    bool same = false;
    double dev = 0.0;
  };
  const auto items = parallel_map<Item>(inputs.size(), [&](std::size_t i) {
    const auto a = network::forward(net, inputs[i]).logits;
    const auto b =
        network::forward(net, spectral::fractional_shift_2d(inputs[i], shifts[i])).logits;
    return Item{network::argmax(a) == network::argmax(b), max_abs_diff(a, b)};
  });
  ConsistencyResult r;
  r.samples = items.size();
  std::size_t same = 0;
  for (const auto& it : items) {
    same += it.same ? 1 : 0;
    r.max_logit_deviation = std::max(r.max_logit_deviation, it.dev);
  }
  r.fraction = static_cast<double>(same) / static_cast<double>(items.size());
  return r;
}

inline ConsistencyResult consistency(const network::Network& net,
                                     const std::vector<Tensor3D>& inputs,
                                     const RationalShift& delta) {
  return consistency(net, inputs, std::vector<RationalShift>(inputs.size(), delta));
}

/// One seeded draw from the grid per input.
inline std::vector<RationalShift> draw_shifts(const ShiftGrid& grid, std::size_t count,
                                              std::uint64_t seed) {
  if (grid.shifts.empty()) throw DomainError("draw_shifts: empty grid");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, grid.shifts.size() - 1);
  std::vector<RationalShift> out(count);
  for (auto& s : out) s = grid.shifts[pick(rng)];
  return out;
}

struct AdversarialResult {
  double clean_accuracy = 0.0;
  double adversarial_accuracy = 0.0;
  std::vector<double> per_shift_accuracy;  // aligned with grid.shifts
  double max_logit_deviation = 0.0;
};

/// A sample counts iff it is classified correctly unshifted and under every
/// shift of the grid.
inline AdversarialResult adversarial_accuracy(const network::Network& net,
                                              const std::vector<Tensor3D>& inputs,
                                              const std::vector<std::size_t>& labels,
                                              const ShiftGrid& grid) {
  if (inputs.empty()) throw DomainError("adversarial_accuracy: empty input list");
  if (labels.size() != inputs.size()) throw ShapeError("adversarial_accuracy: label count");
  for (auto l : labels) {
    if (l >= net.spec.classes) throw DomainError("adversarial_accuracy: label out of range");
  }
  struct Item {
    bool clean = false;
    bool robust = false;
    std::vector<char> per_shift;
    double dev = 0.0;
  };
  const auto items = parallel_map<Item>(inputs.size(), [&](std::size_t i) {
    Item it;
    const auto base = network::forward(net, inputs[i]).logits;
    it.clean = network::argmax(base) == labels[i];
    it.robust = it.clean;
    for (const auto& s : grid.shifts) {
      const auto l = network::forward(net, spectral::fractional_shift_2d(inputs[i], s)).logits;
      const bool ok = network::argmax(l) == labels[i];
      it.per_shift.push_back(ok ? 1 : 0);
      it.robust = it.robust && ok;
      it.dev = std::max(it.dev, max_abs_diff(base, l));
    }
    return it;
  });
  AdversarialResult r;
  r.per_shift_accuracy.assign(grid.shifts.size(), 0.0);
  std::size_t clean = 0, robust = 0;
  for (const auto& it : items) {
    clean += it.clean;
    robust += it.robust;
    for (std::size_t s = 0; s < it.per_shift.size(); ++s) r.per_shift_accuracy[s] += it.per_shift[s];
    r.max_logit_deviation = std::max(r.max_logit_deviation, it.dev);
  }
  const double n = static_cast<double>(items.size());
  r.clean_accuracy = static_cast<double>(clean) / n;
  r.adversarial_accuracy = static_cast<double>(robust) / n;
  for (auto& a : r.per_shift_accuracy) a /= n;
  return r;
}

}  // namespace afc::metrics

#endif  // AFC_METRICS_HPP_
