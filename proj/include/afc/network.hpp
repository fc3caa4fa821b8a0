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

#ifndef AFC_NETWORK_HPP_
#define AFC_NETWORK_HPP_

// Desk-scale ConvNeXt-style classifiers in two variants. The baseline keeps
// the usual aliasing layers (strided convolutions, GeLU, per-pixel
// LayerNorm); the AFC variant swaps each of them for its alias-free
// counterpart so that every tap is equivariant to circular sub-pixel
// translations and the logits are invariant to them.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/layers.hpp"
#include "afc/poly_activation.hpp"
#include "afc/rational.hpp"
#include "afc/tensor.hpp"

namespace afc::network {

enum class Variant { kBaseline, kAfc };

inline std::string to_string(Variant v) {
  return v == Variant::kAfc ? "afc" : "baseline";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "afc") return Variant::kAfc;
  if (s == "baseline") return Variant::kBaseline;
  throw ConfigError("unknown variant '" + s + "' (expected baseline|afc)");
}

struct InputShape {
  std::size_t channels = 3;
  std::size_t height = 32;
  std::size_t width = 32;

  friend bool operator==(const InputShape&, const InputShape&) = default;
};

struct NetworkSpec {
  Variant variant = Variant::kAfc;
  InputShape input;
  std::size_t stem_stride = 4;
  std::vector<std::size_t> stage_widths{8, 16};
  std::vector<std::size_t> blocks_per_stage{1, 1};
  std::size_t classes = 10;
  std::uint64_t seed = 0;
  double activation_scale = 7.0;

  /// stem_stride * 2^(stages - 1).
  std::size_t total_stride() const {
    std::size_t s = stem_stride;
    for (std::size_t i = 1; i < stage_widths.size(); ++i) s *= 2;
    return s;
  }

  void validate() const {
    if (input.channels == 0) throw ConfigError("network.input.channels must be >= 1");
    if (input.height != input.width) throw ConfigError("network.input: height != width");
    if (stem_stride < 2) throw ConfigError("network.stem_stride must be >= 2");
    if (stage_widths.empty()) throw ConfigError("network.stage_widths is empty");
    if (stage_widths.size() != blocks_per_stage.size()) {
      throw ConfigError("network.blocks_per_stage length != stage_widths length");
    }
    for (auto w : stage_widths) {
      if (w == 0) throw ConfigError("network.stage_widths entries must be positive");
    }
    if (classes == 0) throw ConfigError("network.classes must be >= 1");
    if (input.height % total_stride() != 0) {
      throw ConfigError("network.input: size " + std::to_string(input.height) +
                        " not divisible by total stride " +
                        std::to_string(total_stride()));
    }
    if (!(activation_scale > 0.0)) {
      throw ConfigError("network.activation_scale must be > 0");
    }
  }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Block {
  layers::ConvWeights dwconv;   // 7x7 depthwise
  layers::NormParams norm;
  layers::ConvWeights pwconv1;  // 1x1, C -> 4C
  PolyActivation act;           // AFC only
  layers::ConvWeights pwconv2;  // 1x1, 4C -> C
};

struct Downsample {
  layers::NormParams norm;
  layers::ConvWeights conv;  // 2x2
};

struct Stage {
  bool has_downsample = false;
  Downsample down;
  std::vector<Block> blocks;
};

struct Network {
  NetworkSpec spec;
  layers::ConvWeights stem;  // 4x4
  PolyActivation stem_act;   // AFC only (LPF-Poly)
  std::vector<Stage> stages;
  layers::NormParams head_norm;
  layers::Linear head;

  bool is_afc() const { return spec.variant == Variant::kAfc; }
};

/// Per-layer captured output.
struct LayerTap {
  std::string name;
  Tensor3D output;
  std::size_t cumulative_stride = 1;
};

struct ForwardResult {
  std::vector<double> logits;
  std::vector<LayerTap> taps;
};

inline constexpr std::size_t kExpansion = 4;
inline constexpr std::size_t kDepthwiseKernel = 7;
inline constexpr double kDefaultInitStd = 0.02;

/// Seeded Gaussian weights (zero biases), GeLU-fit activation coefficients.
inline Network build_network(const NetworkSpec& spec, double init_std = kDefaultInitStd) {
  spec.validate();
  Network net;
  net.spec = spec;
  const bool afc = spec.variant == Variant::kAfc;
  const auto norm_mode = afc ? layers::NormMode::kPerLayerScale : layers::NormMode::kPerPixel;
  const PolyCoeffs init = layers::fit_gelu_coeffs();

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](std::vector<double>& v) {
    for (auto& x : v) x = init_std * normal(rng);
  };

  const std::size_t w0 = spec.stage_widths.front();
  net.stem = layers::ConvWeights(w0, spec.input.channels, spec.stem_stride, spec.stem_stride);
  fill(net.stem.kernel);
  if (afc) net.stem_act = PolyActivation(w0, init, spec.activation_scale);

  std::size_t prev = w0;
  for (std::size_t s = 0; s < spec.stage_widths.size(); ++s) {
    const std::size_t c = spec.stage_widths[s];
    Stage stage;
    if (s > 0) {
      stage.has_downsample = true;
      stage.down.norm = layers::NormParams(prev, norm_mode);
      stage.down.conv = layers::ConvWeights(c, prev, 2, 2);
      fill(stage.down.conv.kernel);
    }
    for (std::size_t b = 0; b < spec.blocks_per_stage[s]; ++b) {
      Block blk;
      blk.dwconv = layers::ConvWeights(c, c, kDepthwiseKernel, kDepthwiseKernel, c);
      fill(blk.dwconv.kernel);
      blk.norm = layers::NormParams(c, norm_mode);
      blk.pwconv1 = layers::ConvWeights(kExpansion * c, c, 1, 1);
      fill(blk.pwconv1.kernel);
      if (afc) blk.act = PolyActivation(kExpansion * c, init, spec.activation_scale);
      blk.pwconv2 = layers::ConvWeights(c, kExpansion * c, 1, 1);
      fill(blk.pwconv2.kernel);
      stage.blocks.push_back(std::move(blk));
    }
    net.stages.push_back(std::move(stage));
    prev = c;
  }
  net.head_norm = layers::NormParams(prev, norm_mode);
  net.head = layers::Linear(prev, spec.classes);
  fill(net.head.weight);
  return net;
}

/// Parameters of all convolutions and the head.
inline std::size_t conv_parameter_count(const Network& net) {
  std::size_t n = net.stem.parameter_count() + net.head.parameter_count();
  for (const auto& st : net.stages) {
    if (st.has_downsample) n += st.down.conv.parameter_count();
    for (const auto& b : st.blocks) {
      n += b.dwconv.parameter_count() + b.pwconv1.parameter_count() +
           b.pwconv2.parameter_count();
    }
  }
  return n;
}

inline std::size_t norm_parameter_count(const Network& net) {
  std::size_t n = net.head_norm.parameter_count();
  for (const auto& st : net.stages) {
    if (st.has_downsample) n += st.down.norm.parameter_count();
    for (const auto& b : st.blocks) n += b.norm.parameter_count();
  }
  return n;
}

/// Three coefficients per activation channel (zero for the baseline).
inline std::size_t activation_parameter_count(const Network& net) {
  std::size_t n = 3 * net.stem_act.channels();
  for (const auto& st : net.stages) {
    for (const auto& b : st.blocks) n += 3 * b.act.channels();
  }
  return n;
}

inline std::size_t parameter_count(const Network& net) {
  return conv_parameter_count(net) + norm_parameter_count(net) +
         activation_parameter_count(net);
}

namespace detail {

class TapRecorder {
 public:
  explicit TapRecorder(bool enabled) : enabled_(enabled) {}
  void record(std::string name, const Tensor3D& t, std::size_t stride) {
    if (enabled_) taps_.push_back({std::move(name), t, stride});
  }
  std::vector<LayerTap> take() { return std::move(taps_); }

 private:
  bool enabled_;
  std::vector<LayerTap> taps_;
};

}  // namespace detail

/// Deterministic forward pass. With `capture`, every layer boundary yields a
/// tap tagged with its cumulative stride.
inline ForwardResult forward(const Network& net, const Tensor3D& x, bool capture = false) {
  const auto& spec = net.spec;
  if (x.channels() != spec.input.channels || x.height() != spec.input.height ||
      x.width() != spec.input.width) {
    throw ShapeError("forward: input " + x.shape_string() + " does not match spec (" +
                     std::to_string(spec.input.channels) + ", " +
                     std::to_string(spec.input.height) + ", " +
                     std::to_string(spec.input.width) + ")");
  }
  const bool afc = net.is_afc();
  detail::TapRecorder taps(capture);
  std::size_t stride = spec.stem_stride;

  Tensor3D h;
  if (afc) {
    Tensor3D conv = layers::circular_conv2d(x, net.stem);
    taps.record("stem.conv", conv, 1);
    // The LPF-Poly output is aliased on its own; its paired BlurPool removes
    // everything above the folding point.
    const Rational cutoff =
        Rational(1) - Rational(1, static_cast<std::int64_t>(spec.stem_stride));
    h = layers::blurpool(layers::lpf_poly(conv, net.stem_act, cutoff), spec.stem_stride);
  } else {
    h = layers::strided_conv2d(x, net.stem, spec.stem_stride);
  }
  taps.record("stem", h, stride);

  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    const Stage& st = net.stages[s];
    const std::string sp = "stage" + std::to_string(s);
    if (st.has_downsample) {
      h = layers::layer_norm(h, st.down.norm);
      taps.record(sp + ".down.norm", h, stride);
      h = afc ? layers::blurpool(layers::circular_conv2d(h, st.down.conv), 2)
              : layers::strided_conv2d(h, st.down.conv, 2);
      stride *= 2;
      taps.record(sp + ".down", h, stride);
    }
    for (std::size_t b = 0; b < st.blocks.size(); ++b) {
      const Block& blk = st.blocks[b];
      const std::string bp = sp + ".block" + std::to_string(b);
      Tensor3D y = layers::circular_conv2d(h, blk.dwconv);
      taps.record(bp + ".dwconv", y, stride);
      y = layers::layer_norm(y, blk.norm);
      taps.record(bp + ".norm", y, stride);
      y = layers::circular_conv2d(y, blk.pwconv1);
      taps.record(bp + ".pwconv1", y, stride);
      y = afc ? layers::alias_free_poly(y, blk.act) : layers::gelu(y);
      taps.record(bp + ".act", y, stride);
      y = layers::circular_conv2d(y, blk.pwconv2);
      taps.record(bp + ".pwconv2", y, stride);
      h = h + y;
      taps.record(bp, h, stride);
    }
  }

  const std::vector<double> pooled = layers::global_avg_pool(h);
  const Tensor3D normed =
      layers::layer_norm(Tensor3D(pooled.size(), 1, 1, pooled), net.head_norm);
  return {layers::linear_head(normed.data(), net.head), taps.take()};
}

/// Index of the largest logit; ties go to the lowest index.
inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace afc::network

#endif  // AFC_NETWORK_HPP_
