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

#ifndef AFC_IO_HPP_
#define AFC_IO_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/network.hpp"
#include "json.hpp"

namespace afc::io {

using json = nlohmann::json;

inline json to_json(const network::NetworkSpec& s) {
  return json{
      {"variant", network::to_string(s.variant)},
      {"input", {{"channels", s.input.channels}, {"height", s.input.height}, {"width", s.input.width}}},
      {"stem_stride", s.stem_stride},
      {"stage_widths", s.stage_widths},
      {"blocks_per_stage", s.blocks_per_stage},
      {"classes", s.classes},
      {"seed", s.seed},
      {"activation_scale", s.activation_scale},
  };
}

namespace detail {

template <typename T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + "." + key + ": " + e.what());
  }
}

}  // namespace detail

/// Missing keys keep their defaults; unknown keys are rejected.
inline network::NetworkSpec spec_from_json(const json& j, const std::string& path = "network") {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  static const std::vector<std::string> known = {
      "variant", "input", "stem_stride", "stage_widths", "blocks_per_stage",
      "classes", "seed", "activation_scale"};
  for (const auto& [k, v] : j.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError(path + "." + k + ": unknown key");
    }
  }
  network::NetworkSpec s;
  s.variant = network::parse_variant(
      detail::get_or<std::string>(j, "variant", path, network::to_string(s.variant)));
  if (j.contains("input")) {
    const json& in = j.at("input");
    if (!in.is_object()) throw ConfigError(path + ".input: expected an object");
    const std::string ip = path + ".input";
    s.input.channels = detail::get_or<std::size_t>(in, "channels", ip, s.input.channels);
    s.input.height = detail::get_or<std::size_t>(in, "height", ip, s.input.height);
    s.input.width = detail::get_or<std::size_t>(in, "width", ip, s.input.width);
  }
  s.stem_stride = detail::get_or<std::size_t>(j, "stem_stride", path, s.stem_stride);
  s.stage_widths = detail::get_or<std::vector<std::size_t>>(j, "stage_widths", path, s.stage_widths);
  s.blocks_per_stage =
      detail::get_or<std::vector<std::size_t>>(j, "blocks_per_stage", path, s.blocks_per_stage);
  s.classes = detail::get_or<std::size_t>(j, "classes", path, s.classes);
  s.seed = detail::get_or<std::uint64_t>(j, "seed", path, s.seed);
  s.activation_scale = detail::get_or<double>(j, "activation_scale", path, s.activation_scale);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return s;
}

struct NamedArray {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

/// Every parameter of the network in a fixed order.
inline std::vector<NamedArray> collect_parameters(const network::Network& net) {
  std::vector<NamedArray> out;
  auto conv = [&](const std::string& name, const layers::ConvWeights& w) {
    out.push_back({name + ".weight", {w.out_channels, w.in_per_group, w.kh, w.kw}, w.kernel});
    out.push_back({name + ".bias", {w.out_channels}, w.bias});
  };
  auto norm = [&](const std::string& name, const layers::NormParams& n) {
    out.push_back({name + ".gamma", {n.gamma.size()}, n.gamma});
    out.push_back({name + ".beta", {n.beta.size()}, n.beta});
  };
  auto act = [&](const std::string& name, const PolyActivation& p) {
    if (p.channels() == 0) return;
    std::vector<double> v;
    for (const auto& c : p.coeffs) v.insert(v.end(), {c.a0, c.a1, c.a2});
    out.push_back({name + ".coeffs", {p.channels(), 3}, std::move(v)});
  };
  conv("stem", net.stem);
  act("stem.act", net.stem_act);
  for (std::size_t s = 0; s < net.stages.size(); ++s) {
    const auto& st = net.stages[s];
    const std::string sp = "stage" + std::to_string(s);
    if (st.has_downsample) {
      norm(sp + ".down.norm", st.down.norm);
      conv(sp + ".down.conv", st.down.conv);
    }
    for (std::size_t b = 0; b < st.blocks.size(); ++b) {
      const auto& blk = st.blocks[b];
      const std::string bp = sp + ".block" + std::to_string(b);
      conv(bp + ".dwconv", blk.dwconv);
      norm(bp + ".norm", blk.norm);
      conv(bp + ".pwconv1", blk.pwconv1);
      act(bp + ".act", blk.act);
      conv(bp + ".pwconv2", blk.pwconv2);
    }
  }
  norm("head.norm", net.head_norm);
  out.push_back({"head.weight", {net.head.out, net.head.in}, net.head.weight});
  out.push_back({"head.bias", {net.head.out}, net.head.bias});
  return out;
}

/// Flat float64 little-endian blob plus a JSON sidecar describing each array.
inline void write_weights(const network::Network& net, const std::string& bin_path,
                          const std::string& sidecar_path) {
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw ConfigError("cannot open '" + bin_path + "' for writing");
  json tensors = json::array();
  std::size_t offset = 0;
  for (const auto& a : collect_parameters(net)) {
    for (double v : a.values) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
      unsigned char bytes[8];
      for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
      bin.write(reinterpret_cast<const char*>(bytes), 8);
    }
    tensors.push_back({{"name", a.name}, {"shape", a.shape}, {"offset", offset},
                       {"count", a.values.size()}});
    offset += a.values.size();
  }
  json side{{"schema", 1}, {"dtype", "float64-le"}, {"total", offset},
            {"network", to_json(net.spec)}, {"tensors", tensors}};
  std::ofstream js(sidecar_path);
  if (!js) throw ConfigError("cannot open '" + sidecar_path + "' for writing");
  js << side.dump(2) << "\n";
}

/// Reads a blob written by write_weights back into flat arrays.
inline std::vector<NamedArray> read_weights(const std::string& bin_path,
                                            const std::string& sidecar_path) {
  std::ifstream js(sidecar_path);
  if (!js) throw ConfigError("cannot open '" + sidecar_path + "'");
  const json side = json::parse(js);
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw ConfigError("cannot open '" + bin_path + "'");
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(bin)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() != 8 * side.at("total").get<std::size_t>()) {
    throw ConfigError("weights blob size does not match sidecar");
  }
  std::vector<NamedArray> out;
  for (const auto& t : side.at("tensors")) {
    NamedArray a{t.at("name"), t.at("shape").get<std::vector<std::size_t>>(), {}};
    const auto off = t.at("offset").get<std::size_t>();
    const auto cnt = t.at("count").get<std::size_t>();
    for (std::size_t i = 0; i < cnt; ++i) {
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) {
        bits |= static_cast<std::uint64_t>(raw[8 * (off + i) + b]) << (8 * b);
      }
      a.values.push_back(std::bit_cast<double>(bits));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace afc::io

#endif  // AFC_IO_HPP_
