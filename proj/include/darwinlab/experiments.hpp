#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "darwinlab/branches.hpp"
#include "darwinlab/config.hpp"

namespace darwinlab {

/// CSV bodies keyed by file name plus experiment metadata for the manifest.
struct ExperimentOutput {
  std::map<std::string, std::string> files;
  nlohmann::json metadata = nlohmann::json::object();
};

/// fig1a, fig1b and sweep: broadcast preparation, MI curves for every time.
ExperimentOutput experiment_mi_curves(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/// Rate functions, alpha*, the fitted bound and the dephased lower bound.
ExperimentOutput experiment_fig2(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/// MI against lambda^2 n for the interpolated broadcast axis.
ExperimentOutput experiment_fig3(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/// Pointer histograms of the projective ensemble, encoding vs redundancy.
ExperimentOutput experiment_fig4(const ExperimentConfig& cfg, std::ostream* log = nullptr);
/// Three-branch preparation with two degenerate energy densities.
ExperimentOutput experiment_fig5(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Dispatches on cfg.experiment after validate().
ExperimentOutput compute(const ExperimentConfig& cfg, std::ostream* log = nullptr);

struct RunResult {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
  nlohmann::json manifest;
};

/// compute() plus writing every CSV and manifest.json into cfg.output_dir.
RunResult run(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Three-branch state of the partial-degeneracy example:
/// (|+y>^N, |0>^N, |-y>^N) with equal weights.
BranchedState partial_degeneracy_state(int num_env);

/// Shannon entropy of {|c_a|^2} after merging branches of equal energy
/// density; ln 3 / 3 + 2 ln(3/2) / 3 for the partial-degeneracy example.
double partial_plateau_value();

/// Throws InvariantViolation if the curve leaves [0, 2 H_S]-compatible bounds
/// or breaks I(n) + I(N - n) = 2 H(S) by more than 1e-7. The identity pairs
/// F with its complement, which is the leading N - n sites only for states
/// symmetric under site reflection, as every experiment preparation is.
void check_curve_invariants(const MICurve& curve, double h_s, int system_dim);

/// FNV-1a 64-bit digest as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace darwinlab
