#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "darwinlab/ensembles.hpp"
#include "darwinlab/hamiltonians.hpp"
#include "darwinlab/propagate.hpp"

namespace darwinlab {

enum class Experiment { fig1a, fig1b, fig2, fig3, fig4, fig5, sweep };

std::string_view to_string(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::sweep;
  int num_env = 16;
  std::vector<double> times;

  // [broadcast]
  BlochVector axis{0.0, 0.0, 1.0};
  double lambda_t0 = 0.75 * M_PI / 4.0;
  std::vector<double> interp_lambdas;  // fig3 axis interpolation values

  // [ising]
  IsingParams ising;

  // [ldp]
  int n_rate = 12;
  int n_rate_secondary = 10;
  double smear_sigma = 0.5;
  int grid_points = 401;

  // [ensemble]
  EnsembleMode::Kind ensemble_mode = EnsembleMode::Kind::exhaustive;
  std::size_t ensemble_samples = 100'000;
  int bins = 64;

  // [propagator]
  PropagatorConfig propagator;

  double delta = 0.1;  // redundancy tolerance reported in the manifest
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  int threads = 0;  // 0: OpenMP default
};

/// Defaults reproducing each figure at N = 16.
ExperimentConfig default_config(Experiment e);

/// Applies a TOML document on top of `cfg`. Unknown keys or mistyped values
/// raise ConfigError naming the key.
void apply_toml(ExperimentConfig& cfg, std::string_view toml_text, std::string_view source = "config");
void apply_toml_file(ExperimentConfig& cfg, const std::filesystem::path& file);

/// `key=value` with dotted keys, e.g. `ising.h_x=0.9` or `times=[1,2]`.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Rejects inconsistent fields (ConfigError) and sizes beyond the dense or
/// exhaustive routes (InfeasibleSize) before any computation starts.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace darwinlab
