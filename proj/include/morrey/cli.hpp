#pragma once

#include "morrey/checks.hpp"
#include "morrey/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace morrey {

// Resolved run configuration. Embedded verbatim in every JSON report so any
// output can be reproduced; deliberately excludes the worker count, which
// must never influence results.
struct RunConfig {
  int grid_dim = 1;
  double grid_half_width = 8.0;
  Index grid_cells = 4096;

  double ladder_r_min = 0.0;  // 0 = grid spacing
  double ladder_ratio = 0.0;  // 0 = 2^(1/4)
  int ladder_count = 0;       // 0 = reach the domain diameter

  double p = 2.0;
  double lambda = 0.5;
  std::optional<double> q;
  std::optional<double> mu;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> epsilon;

  std::uint64_t seed = 0;
  bool oracle = false;
  std::string output;

  VanishingThresholds thresholds;
  double dominance_tol = 1e-12;
  Index fft_threshold = Index(1) << 15;

  GridSpec grid() const;
  RadiusLadder ladder() const;
  MorreyParams params() const;
  ConvPolicy conv_policy() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig read_config_file(const std::filesystem::path& path);
std::string write_config_text(const RunConfig& config);
Json to_json(const RunConfig& config);

struct SuiteResult {
  Json report;
  bool pass = false;
};

// Single-input dominance checks (the `check dominance --name ... -i f.mry`
// path). `name` is one of sharp-vs-max, hardy-vs-max, hardyalpha-chain,
// calhardy-vs-riesz, hedberg.
SuiteResult run_dominance_on(const std::string& name, const GridFunction& f,
                             const RunConfig& config,
                             std::optional<double> constant_override = {},
                             std::optional<double> slack_override = {},
                             const std::string& ratio_csv = "");

// Preset experiment suites. Each returns the full JSON report and the
// aggregate verdict; the CLI serializes them as-is, and the acceptance
// harness asserts on the same objects.
SuiteResult suite_sharp_dominance();
SuiteResult suite_dominance_chain();
SuiteResult suite_scaling();
SuiteResult suite_spanne();
SuiteResult suite_adams();
SuiteResult suite_modular_lemma(bool two_index);
SuiteResult suite_vanishing();
SuiteResult suite_preservation();
SuiteResult suite_hedberg();

FamilyDescriptor random_bump_train(const GridSpec& spec, std::uint64_t seed, int bumps);

int run_cli(int argc, const char* const* argv);

}  // namespace morrey
