// darwinlab <experiment> [--config FILE] [--set key=value ...] [--out DIR] [--threads K] [--seed S]
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "darwinlab/config.hpp"
#include "darwinlab/error.hpp"
#include "darwinlab/experiments.hpp"

namespace {

constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInvariant = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Redundancy experiments on chaotic spin-chain environments"};
  std::string experiment;
  std::string config_file;
  std::vector<std::string> overrides;
  std::string out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  app.add_option("experiment", experiment, "fig1a, fig1b, fig2, fig3, fig4, fig5 or sweep")->required();
  app.add_option("--config", config_file, "TOML configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "override a config key, e.g. --set ising.h_x=0.9");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--seed", seed, "seed for sampled ensembles");
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    using namespace darwinlab;
    ExperimentConfig cfg = default_config(parse_experiment(experiment));
    if (!config_file.empty()) apply_toml_file(cfg, config_file);
    for (const std::string& s : overrides) apply_override(cfg, s);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (threads) cfg.threads = *threads;
    if (seed) cfg.seed = *seed;

    const RunResult result = run(cfg, quiet ? nullptr : &std::cerr);
    for (const auto& f : result.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const darwinlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const darwinlab::InfeasibleSize& e) {
    std::cerr << "infeasible size: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const darwinlab::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
}
