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

#ifndef AFC_EXPERIMENT_HPP_
#define AFC_EXPERIMENT_HPP_

// Experiment drivers behind the command-line tool. Every command returns a
// JSON report (keys sorted, schema-versioned), a CSV rendering of the same
// data and an exit code that is 0 iff every assertion of the suite held.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "afc/errors.hpp"
#include "afc/fft.hpp"
#include "afc/io.hpp"
#include "afc/layers.hpp"
#include "afc/metrics.hpp"
#include "afc/network.hpp"
#include "afc/oracle.hpp"
#include "afc/rational.hpp"
#include "afc/spectral.hpp"

namespace afc::experiment {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kInputNote =
    "synthetic seeded standard-normal images, Nyquist-sanitized with a cutoff-1 ideal LPF";

// Pass/fail thresholds of each suite.
inline constexpr double kSpectralTolerance = 1e-9;
inline constexpr double kAfcLayerDiffTolerance = 1e-4;
inline constexpr double kBaselineLayerDiffFloor = 0.05;
inline constexpr double kLogitTolerance = 1e-6;
inline constexpr double kGradTolerance = 1e-6;
inline constexpr double kGradStep = 1e-5;

struct ExperimentConfig {
  network::NetworkSpec network;
  std::string experiment = "equivariance";
  std::optional<std::size_t> samples;
  std::string grid;  // "integer:B" | "half:B" | "frac:k"; empty = use delta
  RationalShift delta{Rational(1, 2), Rational(1, 2)};
  std::string out;  // empty = stdout
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string variant = "both";  // baseline | afc | both
  std::vector<std::size_t> sizes{2, 3, 4, 5, 8, 15, 16, 32};
  std::string corrupt_kernel;  // test hook for verify-spectral

  std::size_t sample_count() const {
    if (samples) return *samples;
    if (experiment == "verify-spectral") return 100;
    if (experiment == "gradcheck") return 50;
    return 64;
  }

  void validate() const {
    static const std::vector<std::string> kinds = {
        "verify-spectral", "equivariance", "consistency", "adversarial", "gradcheck"};
    if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end()) {
      throw ConfigError("config.experiment: unknown experiment '" + experiment + "'");
    }
    if (samples && *samples < 1) throw ConfigError("config.samples: must be >= 1");
    if (format != "json" && format != "csv") {
      throw ConfigError("config.format: expected json|csv, got '" + format + "'");
    }
    if (variant != "both" && variant != "afc" && variant != "baseline") {
      throw ConfigError("config.variant: expected baseline|afc|both, got '" + variant + "'");
    }
    if (sizes.empty()) throw ConfigError("config.sizes: empty");
    for (auto s : sizes) {
      if (s < 1) throw ConfigError("config.sizes: entries must be >= 1");
    }
    if (!grid.empty()) {
      try {
        (void)metrics::parse_grid(grid);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("config.grid: ") + e.what());
      }
    }
  }
};

inline json to_json(const ExperimentConfig& c) {
  json j{{"network", io::to_json(c.network)},
         {"experiment", c.experiment},
         {"samples", c.sample_count()},
         {"delta", c.delta.to_string()},
         {"format", c.format},
         {"seed", c.seed},
         {"variant", c.variant}};
  if (!c.grid.empty()) j["grid"] = c.grid;
  if (c.experiment == "verify-spectral") j["sizes"] = c.sizes;
  if (!c.corrupt_kernel.empty()) j["corrupt_kernel"] = c.corrupt_kernel;
  return j;
}

inline ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig c;
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) throw ConfigError(std::string("config.") + key + ": expected a string");
    dst = j.at(key).get<std::string>();
  };
  auto uint = [&](const char* key) -> std::optional<std::uint64_t> {
    if (!j.contains(key)) return std::nullopt;
    if (!j.at(key).is_number_unsigned()) {
      throw ConfigError(std::string("config.") + key + ": expected a non-negative integer");
    }
    return j.at(key).get<std::uint64_t>();
  };
  for (const auto& [k, v] : j.items()) {
    static const std::vector<std::string> known = {
        "network", "experiment", "samples", "grid", "delta", "out", "format",
        "seed", "variant", "sizes", "corrupt_kernel"};
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ConfigError("config." + k + ": unknown key");
    }
  }
  if (j.contains("network")) c.network = io::spec_from_json(j.at("network"), "config.network");
  str("experiment", c.experiment);
  if (auto s = uint("samples")) c.samples = static_cast<std::size_t>(*s);
  str("grid", c.grid);
  if (j.contains("delta")) {
    std::string d;
    str("delta", d);
    try {
      c.delta = RationalShift::parse(d);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config.delta: ") + e.what());
    }
  }
  str("out", c.out);
  str("format", c.format);
  if (auto s = uint("seed")) c.seed = *s;
  str("variant", c.variant);
  if (j.contains("sizes")) {
    try {
      c.sizes = j.at("sizes").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config.sizes: ") + e.what());
    }
  }
  str("corrupt_kernel", c.corrupt_kernel);
  c.validate();
  return c;
}

struct CommandOutput {
  int exit_code = 0;
  json report;
  std::string csv;
};

namespace detail {

inline json base_report(const ExperimentConfig& cfg) {
  return json{{"schema", kSchemaVersion}, {"experiment", cfg.experiment},
              {"config", to_json(cfg)}, {"inputs", kInputNote}};
}

inline std::vector<network::Variant> variants(const ExperimentConfig& cfg) {
  if (cfg.variant == "afc") return {network::Variant::kAfc};
  if (cfg.variant == "baseline") return {network::Variant::kBaseline};
  return {network::Variant::kBaseline, network::Variant::kAfc};
}

inline network::Network build(const ExperimentConfig& cfg, network::Variant v) {
  network::NetworkSpec s = cfg.network;
  s.variant = v;
  return network::build_network(s);
}

inline std::vector<Tensor3D> inputs(const ExperimentConfig& cfg) {
  std::vector<Tensor3D> xs;
  const std::size_t n = cfg.sample_count();
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(metrics::random_input(cfg.network.input, cfg.seed * 1000003ULL + i));
  }
  return xs;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// True when the shift is a whole number of output pixels everywhere in the
// network, i.e. even the baseline is exactly equivariant.
inline bool multiple_of_stride(const RationalShift& d, std::size_t stride) {
  const Rational s(static_cast<std::int64_t>(stride));
  return (d.dy / s).is_integer() && (d.dx / s).is_integer();
}

// ---------------------------------------------------------------------------
// verify-spectral

struct KernelStats {
  double max_dev = 0.0;
  std::optional<json> first_failure;
};

class SpectralVerifier {
 public:
  explicit SpectralVerifier(const ExperimentConfig& cfg) : cfg_(cfg) {}

  json run() {
    std::mt19937_64 rng(cfg_.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t n : cfg_.sizes) {
      for (std::size_t sample = 0; sample < cfg_.sample_count(); ++sample) {
        Signal x(n);
        for (auto& v : x) v = normal(rng);
        check_signal(x, n, sample);
      }
    }
    json kernels = json::object();
    json failures = json::array();
    for (const auto& [name, st] : stats_) {
      kernels[name] = {{"max_abs_deviation", st.max_dev},
                       {"pass", !st.first_failure.has_value()}};
      if (st.first_failure) failures.push_back(*st.first_failure);
    }
    return json{{"kernels", kernels}, {"failures", failures}, {"tolerance", kSpectralTolerance}};
  }

  bool passed() const {
    return std::none_of(stats_.begin(), stats_.end(),
                        [](const auto& kv) { return kv.second.first_failure.has_value(); });
  }

 private:
  spectral::DftMask maybe_corrupt(spectral::DftMask m, const std::string& name) const {
    if (cfg_.corrupt_kernel == name && m.size() > 1) m.gains[1] += 0.25;
    return m;
  }

  void record(const std::string& kernel, std::span<const double> got,
              std::span<const double> want, std::span<const double> x, std::size_t sample,
              const std::string& params) {
    auto& st = stats_[kernel];
    const double dev = max_abs_diff(got, want);
    st.max_dev = std::max(st.max_dev, dev);
    if (!(dev < kSpectralTolerance) && !st.first_failure) {
      st.first_failure = json{{"kernel", kernel}, {"size", x.size()}, {"sample", sample},
                              {"params", params}, {"deviation", dev},
                              {"signal", std::vector<double>(x.begin(), x.end())}};
    }
  }

  void check_signal(const Signal& x, std::size_t n, std::size_t sample) {
    // Forward transform against direct summation.
    {
      const auto fast = fft::forward(x);
      const auto slow = oracle::naive_dft(x);
      std::vector<double> a, b;
      for (std::size_t k = 0; k < n; ++k) {
        a.insert(a.end(), {fast[k].real(), fast[k].imag()});
        b.insert(b.end(), {slow[k].real(), slow[k].imag()});
      }
      record("dft", a, b, x, sample, "");
    }
    for (const Rational c : {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4),
                             Rational(3, 4)}) {
      const auto mask = maybe_corrupt(spectral::lowpass_mask(n, c), "lowpass_mask");
      const Signal got = spectral::apply_mask(x, mask);
      record("ideal_lpf", got, oracle::lowpass(x, c.value()), x, sample,
             "cutoff=" + c.to_string());
      record("lpf_idempotence", spectral::apply_mask(got, mask), got, x, sample,
             "cutoff=" + c.to_string());
    }
    for (std::size_t f : {2, 3, 4}) {
      const auto mask = maybe_corrupt(spectral::upsample_mask(n, f), "upsample_mask");
      const Signal up = spectral::upsample_1d(x, f, mask);
      record("upsample", up, oracle::upsample(x, f), x, sample, "factor=" + std::to_string(f));
      const auto dmask = maybe_corrupt(spectral::decimation_mask(n * f, f), "decimation_mask");
      record("round_trip", spectral::downsample_1d(up, f, dmask), x, x, sample,
             "factor=" + std::to_string(f));
      if (n % f == 0) {
        const auto own = maybe_corrupt(spectral::decimation_mask(n, f), "decimation_mask");
        record("downsample", spectral::downsample_1d(x, f, own), oracle::downsample(x, f), x,
               sample, "factor=" + std::to_string(f));
      }
    }
    for (const Rational d : {Rational(1, 2), Rational(-1, 2), Rational(1, 3), Rational(-2, 3),
                             Rational(3, 4), Rational(5, 8), Rational(7, 5), Rational(2)}) {
      Signal got;
      if (d.is_integer()) {
        got = spectral::roll_1d(x, d.num());
      } else {
        const auto f = static_cast<std::size_t>(d.den());
        const auto um = maybe_corrupt(spectral::upsample_mask(n, f), "upsample_mask");
        const auto dm = maybe_corrupt(spectral::decimation_mask(n * f, f), "decimation_mask");
        got = spectral::downsample_1d(
            spectral::roll_1d(spectral::upsample_1d(x, f, um), d.num()), f, dm);
      }
      record("fractional_shift", got, oracle::oracle_shift(x, d.value()), x, sample,
             "shift=" + d.to_string());
    }
  }

  const ExperimentConfig& cfg_;
  std::map<std::string, KernelStats> stats_;
};

}  // namespace detail

inline CommandOutput cmd_verify_spectral(const ExperimentConfig& cfg) {
  detail::SpectralVerifier v(cfg);
  CommandOutput out;
  out.report = detail::base_report(cfg);
  out.report["results"] = v.run();
  out.report["pass"] = v.passed();
  out.exit_code = v.passed() ? 0 : 1;
  std::ostringstream csv;
  csv << "kernel,max_abs_deviation,pass\n";
  for (const auto& [name, k] : out.report["results"]["kernels"].items()) {
    csv << name << "," << detail::fmt(k["max_abs_deviation"].get<double>()) << ","
        << (k["pass"].get<bool>() ? "true" : "false") << "\n";
  }
  out.csv = csv.str();
  return out;
}

inline CommandOutput cmd_equivariance(const ExperimentConfig& cfg) {
  CommandOutput out;
  out.report = detail::base_report(cfg);
  const auto xs = detail::inputs(cfg);
  std::ostringstream csv;
  csv << "layer,variant,mean_diff\n";
  bool pass = true;
  json results = json::object();
  json checks = json::array();
  for (auto v : detail::variants(cfg)) {
    const auto net = detail::build(cfg, v);
    const auto rep = metrics::mean_equivariance_report(net, xs, cfg.delta);
    json layers = json::array();
    for (const auto& l : rep.layers) {
      layers.push_back({{"layer", l.layer}, {"cumulative_stride", l.cumulative_stride},
                        {"mean_diff", l.diff}});
      csv << l.layer << "," << network::to_string(v) << "," << detail::fmt(l.diff) << "\n";
    }
    const std::string name = network::to_string(v);
    results[name] = {{"layers", layers}, {"max_mean_diff", rep.max_diff()}};
    if (v == network::Variant::kAfc) {
      const bool ok = rep.max_diff() < kAfcLayerDiffTolerance;
      checks.push_back({{"check", "afc max layer diff < 1e-4"}, {"pass", ok}});
      pass = pass && ok;
    } else if (!detail::multiple_of_stride(cfg.delta, net.spec.total_stride())) {
      const bool ok = rep.max_diff() > kBaselineLayerDiffFloor;
      checks.push_back({{"check", "baseline max layer diff > 0.05"}, {"pass", ok}});
      pass = pass && ok;
    }
  }
  out.report["results"] = results;
  out.report["checks"] = checks;
  out.report["pass"] = pass;
  out.exit_code = pass ? 0 : 1;
  out.csv = csv.str();
  return out;
}

inline CommandOutput cmd_consistency(const ExperimentConfig& cfg) {
  CommandOutput out;
  out.report = detail::base_report(cfg);
  const auto xs = detail::inputs(cfg);
  std::vector<RationalShift> shifts(xs.size(), cfg.delta);
  if (!cfg.grid.empty()) {
    shifts = metrics::draw_shifts(metrics::parse_grid(cfg.grid), xs.size(), cfg.seed + 17);
  }
  json drawn = json::array();
  for (const auto& s : shifts) drawn.push_back(s.to_string());
  out.report["shifts"] = drawn;
  std::ostringstream csv;
  csv << "variant,consistency,max_logit_deviation\n";
  bool pass = true;
  json results = json::object();
  json checks = json::array();
  for (auto v : detail::variants(cfg)) {
    const auto net = detail::build(cfg, v);
    const auto r = metrics::consistency(net, xs, shifts);
    const std::string name = network::to_string(v);
    results[name] = {{"consistency", r.fraction}, {"max_logit_deviation", r.max_logit_deviation},
                     {"samples", r.samples}};
    csv << name << "," << detail::fmt(r.fraction) << "," << detail::fmt(r.max_logit_deviation)
        << "\n";
    if (v == network::Variant::kAfc) {
      const bool ok = r.fraction == 1.0 && r.max_logit_deviation < kLogitTolerance;
      checks.push_back({{"check", "afc consistency == 1 and logit deviation < 1e-6"},
                        {"pass", ok}});
      pass = pass && ok;
    }
  }
  out.report["results"] = results;
  out.report["checks"] = checks;
  out.report["pass"] = pass;
  out.exit_code = pass ? 0 : 1;
  out.csv = csv.str();
  return out;
}

/// Labels from a second, independently seeded network. A baseline teacher is
/// used because freshly initialized AFC nets collapse to nearly one class: the
/// DC term of the scaled quadratic dominates the pooled features.
inline std::vector<std::size_t> teacher_labels(const ExperimentConfig& cfg,
                                               const std::vector<Tensor3D>& xs) {
  network::NetworkSpec s = cfg.network;
  s.variant = network::Variant::kBaseline;
  s.seed = cfg.network.seed ^ 0x9e3779b97f4a7c15ULL;
  const auto teacher = network::build_network(s);
  return metrics::parallel_map<std::size_t>(xs.size(), [&](std::size_t i) {
    return network::argmax(network::forward(teacher, xs[i]).logits);
  });
}

inline CommandOutput cmd_adversarial(const ExperimentConfig& cfg) {
  CommandOutput out;
  out.report = detail::base_report(cfg);
  const auto xs = detail::inputs(cfg);
  const auto labels = teacher_labels(cfg, xs);
  const auto grid = metrics::parse_grid(cfg.grid.empty() ? "frac:4" : cfg.grid);
  std::ostringstream csv;
  csv << "variant,shift,accuracy\n";
  bool pass = true;
  json results = json::object();
  json checks = json::array();
  for (auto v : detail::variants(cfg)) {
    const auto net = detail::build(cfg, v);
    const auto r = metrics::adversarial_accuracy(net, xs, labels, grid);
    const std::string name = network::to_string(v);
    json per = json::array();
    csv << name << ",clean," << detail::fmt(r.clean_accuracy) << "\n";
    for (std::size_t i = 0; i < grid.shifts.size(); ++i) {
      per.push_back({{"shift", grid.shifts[i].to_string()}, {"accuracy", r.per_shift_accuracy[i]}});
      csv << name << ",\"" << grid.shifts[i].to_string() << "\","
          << detail::fmt(r.per_shift_accuracy[i]) << "\n";
    }
    results[name] = {{"clean_accuracy", r.clean_accuracy},
                     {"adversarial_accuracy", r.adversarial_accuracy},
                     {"max_logit_deviation", r.max_logit_deviation},
                     {"per_shift", per}};
    if (v == network::Variant::kAfc) {
      const bool ok = r.adversarial_accuracy == r.clean_accuracy;
      checks.push_back({{"check", "afc adversarial accuracy == clean accuracy"}, {"pass", ok}});
      pass = pass && ok;
    }
  }
  out.report["grid"] = {{"label", grid.label()}, {"size", grid.shifts.size()}};
  out.report["results"] = results;
  out.report["checks"] = checks;
  out.report["pass"] = pass;
  out.exit_code = pass ? 0 : 1;
  out.csv = csv.str();
  return out;
}

/// Relative error |a - b| / max(|a|, |b|, 1e-12).
inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

struct GradcheckCase {
  double max_relative_error = 0.0;
};

/// Compares poly_coeff_gradient with central differences of
/// L(a) = sum(upstream * poly_eval(x; a)).
inline GradcheckCase gradcheck_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  const std::size_t c = dim(rng), h = dim(rng), w = dim(rng);
  Tensor3D x(c, h, w), up(c, h, w);
  for (auto& v : x.data()) v = normal(rng);
  for (auto& v : up.data()) v = normal(rng);
  std::vector<PolyCoeffs> coeffs(c);
  for (auto& q : coeffs) q = {normal(rng), normal(rng), normal(rng)};
  const double scale = (rng() % 2 == 0) ? 1.0 : 7.0;
  PolyActivation p(coeffs, scale);

  const auto grads = layers::poly_coeff_gradient(x, p, up);
  auto loss = [&](const PolyActivation& q) {
    const Tensor3D y = layers::poly_eval(x, q);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += up.data()[i] * y.data()[i];
    return s;
  };
  GradcheckCase out;
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (int k = 0; k < 3; ++k) {
      PolyActivation plus = p, minus = p;
      double* pp = k == 0 ? &plus.coeffs[ch].a0 : k == 1 ? &plus.coeffs[ch].a1 : &plus.coeffs[ch].a2;
      double* pm = k == 0 ? &minus.coeffs[ch].a0 : k == 1 ? &minus.coeffs[ch].a1 : &minus.coeffs[ch].a2;
      *pp += kGradStep;
      *pm -= kGradStep;
      const double fd = (loss(plus) - loss(minus)) / (2.0 * kGradStep);
      const double g = k == 0 ? grads[ch].g0 : k == 1 ? grads[ch].g1 : grads[ch].g2;
      out.max_relative_error = std::max(out.max_relative_error, relative_error(g, fd));
    }
  }
  return out;
}

inline CommandOutput cmd_gradcheck(const ExperimentConfig& cfg) {
  CommandOutput out;
  out.report = detail::base_report(cfg);
  std::ostringstream csv;
  csv << "case,max_relative_error\n";
  double worst = 0.0;
  json cases = json::array();
  for (std::size_t i = 0; i < cfg.sample_count(); ++i) {
    const auto r = gradcheck_case(cfg.seed * 7919ULL + i);
    worst = std::max(worst, r.max_relative_error);
    cases.push_back(r.max_relative_error);
    csv << i << "," << detail::fmt(r.max_relative_error) << "\n";
  }
  const bool pass = worst < kGradTolerance;
  out.report["results"] = {{"max_relative_error", worst}, {"cases", cases},
                           {"step", kGradStep}, {"tolerance", kGradTolerance}};
  out.report["pass"] = pass;
  out.exit_code = pass ? 0 : 1;
  out.csv = csv.str();
  return out;
}

inline CommandOutput run(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment == "verify-spectral") return cmd_verify_spectral(cfg);
  if (cfg.experiment == "equivariance") return cmd_equivariance(cfg);
  if (cfg.experiment == "consistency") return cmd_consistency(cfg);
  if (cfg.experiment == "adversarial") return cmd_adversarial(cfg);
  return cmd_gradcheck(cfg);
}

/// Report text in the configured format.
inline std::string render(const ExperimentConfig& cfg, const CommandOutput& out) {
  return cfg.format == "csv" ? out.csv : out.report.dump(2) + "\n";
}

inline void write(const ExperimentConfig& cfg, const CommandOutput& out) {
  const std::string text = render(cfg, out);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw ConfigError("config.out: cannot open '" + cfg.out + "' for writing");
  f << text;
}

}  // namespace afc::experiment

#endif  // AFC_EXPERIMENT_HPP_
