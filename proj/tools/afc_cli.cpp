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

// afc: command-line driver for the alias-free convnet verification suites.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "afc/experiment.hpp"
#include "afc/io.hpp"
#include "afc/network.hpp"

namespace {

using afc::experiment::ExperimentConfig;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> size;
  std::optional<std::string> variant;
  std::optional<std::string> grid;
  std::optional<std::string> delta;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::vector<std::size_t> sizes;
  std::optional<std::string> corrupt;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "input / draw seed");
  cmd->add_option("--samples", f.samples, "number of samples")->check(CLI::PositiveNumber);
  cmd->add_option("--size", f.size, "input height = width")->check(CLI::IsMember({16, 32, 64}));
  cmd->add_option("--variant", f.variant, "network variant")
      ->check(CLI::IsMember({"baseline", "afc", "both"}));
  cmd->add_option("--grid", f.grid, "translation grid integer:B | half:B | frac:k");
  cmd->add_option("--delta", f.delta, "shift m1/n1,m2/n2 (rows, columns)");
  cmd->add_option("--out", f.out, "report path (default stdout)");
  cmd->add_option("--format", f.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

ExperimentConfig resolve(const std::string& experiment, const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw afc::ConfigError(f.config + ": " + e.what());
    }
    try {
      cfg = afc::experiment::config_from_json(j);
    } catch (const afc::ConfigError& e) {
      throw afc::ConfigError(f.config + ": " + e.what());
    }
  }
  cfg.experiment = experiment;
  if (f.seed) cfg.seed = *f.seed;
  if (f.samples) cfg.samples = *f.samples;
  if (f.size) {
    cfg.network.input.height = *f.size;
    cfg.network.input.width = *f.size;
  }
  if (f.variant) cfg.variant = *f.variant;
  if (f.grid) cfg.grid = *f.grid;
  if (f.delta) cfg.delta = afc::RationalShift::parse(*f.delta);
  if (f.out) cfg.out = *f.out;
  if (f.format) cfg.format = *f.format;
  if (!f.sizes.empty()) cfg.sizes = f.sizes;
  if (f.corrupt) cfg.corrupt_kernel = *f.corrupt;
  cfg.network.validate();
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alias-free convnet verification tool"};
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-spectral", "check resampling kernels against the naive-DFT / sinc oracles"},
      {"equivariance", "per-layer equivariance diff for baseline and AFC networks"},
      {"consistency", "argmax consistency under translations"},
      {"adversarial", "adversarial accuracy over a translation grid"},
      {"gradcheck", "activation-coefficient gradients vs finite differences"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, flags);
    if (name == "verify-spectral") {
      cmd->add_option("--sizes", flags.sizes, "signal lengths")->delimiter(',');
      cmd->add_option("--corrupt-kernel", flags.corrupt, "test hook: perturb one mask")
          ->group("");
    }
  }
  std::string weights_out;
  std::string weights_config;
  std::optional<std::string> weights_variant;
  std::optional<std::uint64_t> weights_seed;
  CLI::App* dump = app.add_subcommand("dump-weights", "write network weights (.bin + .json)");
  dump->add_option("--config", weights_config, "config with a network section")
      ->check(CLI::ExistingFile);
  dump->add_option("--variant", weights_variant)->check(CLI::IsMember({"baseline", "afc"}));
  dump->add_option("--seed", weights_seed, "network seed");
  dump->add_option("--out", weights_out, "output prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (dump->parsed()) {
      Flags f;
      f.config = weights_config;
      ExperimentConfig cfg = resolve("equivariance", f);
      if (weights_variant) cfg.network.variant = afc::network::parse_variant(*weights_variant);
      if (weights_seed) cfg.network.seed = *weights_seed;
      const auto net = afc::network::build_network(cfg.network);
      afc::io::write_weights(net, weights_out + ".bin", weights_out + ".json");
      return 0;
    }
    for (const auto& [name, help] : commands) {
      if (!app.got_subcommand(name)) continue;
      const ExperimentConfig cfg = resolve(name, flags);
      const auto out = afc::experiment::run(cfg);
      afc::experiment::write(cfg, out);
      if (out.exit_code != 0) {
        std::cerr << name << ": FAILED\n";
        const auto& results = out.report["results"];
        if (results.contains("failures")) {
          for (const auto& fl : results["failures"]) {
            std::cerr << "  kernel " << fl["kernel"].get<std::string>() << " (N="
                      << fl["size"] << ", " << fl["params"].get<std::string>()
                      << "): deviation " << fl["deviation"] << "\n";
          }
        }
      }
      return out.exit_code;
    }
  } catch (const afc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
