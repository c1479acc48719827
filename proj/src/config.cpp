#include "darwinlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <toml.hpp>

#include "darwinlab/error.hpp"
#include "darwinlab/ldp.hpp"

namespace darwinlab {

namespace {

constexpr int kMaxEnv = 24;

std::string key_path(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key) : fmt::format("{}.{}", section, key);
}

double as_double(const toml::node& node, const std::string& key) {
  if (auto v = node.value<double>()) return *v;
  throw ConfigError(fmt::format("{}: expected a number", key));
}

std::int64_t as_int(const toml::node& node, const std::string& key) {
  if (node.is_integer()) return *node.value<std::int64_t>();
  throw ConfigError(fmt::format("{}: expected an integer", key));
}

std::string as_string(const toml::node& node, const std::string& key) {
  if (auto v = node.value<std::string>()) return *v;
  throw ConfigError(fmt::format("{}: expected a string", key));
}

std::vector<double> as_double_list(const toml::node& node, const std::string& key) {
  const toml::array* arr = node.as_array();
  if (!arr) throw ConfigError(fmt::format("{}: expected an array of numbers", key));
  std::vector<double> out;
  for (const toml::node& item : *arr) out.push_back(as_double(item, key));
  return out;
}

BlochVector parse_axis(const toml::node& node, const std::string& key) {
  if (node.is_string()) {
    const std::string s = as_string(node, key);
    if (s == "x") return {1.0, 0.0, 0.0};
    if (s == "y") return {0.0, 1.0, 0.0};
    if (s == "z") return {0.0, 0.0, 1.0};
    throw ConfigError(fmt::format("{}: expected \"x\", \"y\", \"z\" or [x, y, z]", key));
  }
  const std::vector<double> v = as_double_list(node, key);
  if (v.size() != 3) throw ConfigError(fmt::format("{}: axis needs three components", key));
  const BlochVector m{v[0], v[1], v[2]};
  if (std::abs(m.norm() - 1.0) > 1e-10)
    throw ConfigError(fmt::format("{}: axis must be a unit vector (norm {:.12g})", key, m.norm()));
  return m;
}

const toml::table& as_section(const toml::node& node, std::string_view name) {
  const toml::table* t = node.as_table();
  if (!t) throw ConfigError(fmt::format("{}: expected a table", name));
  return *t;
}

void apply_broadcast(ExperimentConfig& cfg, const toml::table& t) {
  for (auto&& [k, v] : t) {
    const std::string key = key_path("broadcast", k.str());
    if (k == "axis") cfg.axis = parse_axis(v, key);
    else if (k == "lambda_t0") cfg.lambda_t0 = as_double(v, key);
    else if (k == "lambdas") cfg.interp_lambdas = as_double_list(v, key);
    else throw ConfigError(fmt::format("unknown key {}", key));
  }
}

void apply_ising(ExperimentConfig& cfg, const toml::table& t) {
  for (auto&& [k, v] : t) {
    const std::string key = key_path("ising", k.str());
    if (k == "J") cfg.ising.J = as_double(v, key);
    else if (k == "h_x") cfg.ising.h_x = as_double(v, key);
    else if (k == "h_z") cfg.ising.h_z = as_double(v, key);
    else if (k == "boundary") {
      const std::string b = as_string(v, key);
      if (b == "periodic") cfg.ising.boundary = Boundary::periodic;
      else if (b == "open") cfg.ising.boundary = Boundary::open;
      else throw ConfigError(fmt::format("{}: expected \"periodic\" or \"open\"", key));
    } else {
      throw ConfigError(fmt::format("unknown key {}", key));
    }
  }
}

void apply_ldp(ExperimentConfig& cfg, const toml::table& t) {
  for (auto&& [k, v] : t) {
    const std::string key = key_path("ldp", k.str());
    if (k == "n_rate") cfg.n_rate = static_cast<int>(as_int(v, key));
    else if (k == "n_rate_secondary") cfg.n_rate_secondary = static_cast<int>(as_int(v, key));
    else if (k == "smear_sigma") cfg.smear_sigma = as_double(v, key);
    else if (k == "grid_points") cfg.grid_points = static_cast<int>(as_int(v, key));
    else throw ConfigError(fmt::format("unknown key {}", key));
  }
}

void apply_ensemble(ExperimentConfig& cfg, const toml::table& t) {
  for (auto&& [k, v] : t) {
    const std::string key = key_path("ensemble", k.str());
    if (k == "mode") {
      const std::string m = as_string(v, key);
      if (m == "exhaustive") cfg.ensemble_mode = EnsembleMode::Kind::exhaustive;
      else if (m == "sampled") cfg.ensemble_mode = EnsembleMode::Kind::sampled;
      else throw ConfigError(fmt::format("{}: expected \"exhaustive\" or \"sampled\"", key));
    } else if (k == "samples") {
      const auto s = as_int(v, key);
      if (s <= 0) throw ConfigError(fmt::format("{}: must be positive", key));
      cfg.ensemble_samples = static_cast<std::size_t>(s);
    } else if (k == "bins") {
      cfg.bins = static_cast<int>(as_int(v, key));
    } else {
      throw ConfigError(fmt::format("unknown key {}", key));
    }
  }
}

void apply_propagator(ExperimentConfig& cfg, const toml::table& t) {
  for (auto&& [k, v] : t) {
    const std::string key = key_path("propagator", k.str());
    if (k == "krylov_dim") cfg.propagator.krylov_dim = static_cast<int>(as_int(v, key));
    else if (k == "step_dt") cfg.propagator.step_dt = as_double(v, key);
    else if (k == "tol") cfg.propagator.tol = as_double(v, key);
    else if (k == "max_steps") cfg.propagator.max_steps = static_cast<int>(as_int(v, key));
    else throw ConfigError(fmt::format("unknown key {}", key));
  }
}

void apply_table(ExperimentConfig& cfg, const toml::table& root) {
  for (auto&& [k, v] : root) {
    const std::string key(k.str());
    if (k == "broadcast") apply_broadcast(cfg, as_section(v, key));
    else if (k == "ising") apply_ising(cfg, as_section(v, key));
    else if (k == "ldp") apply_ldp(cfg, as_section(v, key));
    else if (k == "ensemble") apply_ensemble(cfg, as_section(v, key));
    else if (k == "propagator") apply_propagator(cfg, as_section(v, key));
    else if (k == "N") cfg.num_env = static_cast<int>(as_int(v, key));
    else if (k == "times") cfg.times = as_double_list(v, key);
    else if (k == "seed") {
      const auto s = as_int(v, key);
      if (s < 0) throw ConfigError("seed: must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (k == "threads") {
      if (v.is_string() && as_string(v, key) == "auto") cfg.threads = 0;
      else cfg.threads = static_cast<int>(as_int(v, key));
    } else if (k == "delta") {
      cfg.delta = as_double(v, key);
    } else if (k == "output_dir") {
      cfg.output_dir = as_string(v, key);
    } else {
      throw ConfigError(fmt::format("unknown key {}", key));
    }
  }
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::fig1a: return "fig1a";
    case Experiment::fig1b: return "fig1b";
    case Experiment::fig2: return "fig2";
    case Experiment::fig3: return "fig3";
    case Experiment::fig4: return "fig4";
    case Experiment::fig5: return "fig5";
    case Experiment::sweep: return "sweep";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::fig1a, Experiment::fig1b, Experiment::fig2, Experiment::fig3,
                       Experiment::fig4, Experiment::fig5, Experiment::sweep})
    if (to_string(e) == name) return e;
  throw ConfigError(fmt::format("unknown experiment '{}'", name));
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.times = {1, 2, 4, 8, 16, 32};
  cfg.interp_lambdas = {0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
  switch (e) {
    case Experiment::fig1a:
    case Experiment::fig5:
    case Experiment::sweep:
      cfg.axis = {0.0, 0.0, 1.0};
      break;
    case Experiment::fig1b:
      cfg.axis = {0.0, 1.0, 0.0};
      break;
    case Experiment::fig2:
      cfg.axis = {0.0, 1.0, 0.0};
      cfg.times = {64};
      break;
    case Experiment::fig3:
      cfg.times = {32};
      break;
    case Experiment::fig4:
      cfg.times = {32};
      break;
  }
  return cfg;
}

void apply_toml(ExperimentConfig& cfg, std::string_view toml_text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& err) {
    std::ostringstream os;
    os << err;
    throw ConfigError(fmt::format("{}: {}", source, os.str()));
  }
  apply_table(cfg, root);
}

void apply_toml_file(ExperimentConfig& cfg, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", file.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_toml(cfg, buffer.str(), file.string());
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError(fmt::format("--set expects key=value, got '{}'", assignment));
  std::string key(assignment.substr(0, eq));
  std::string value(assignment.substr(eq + 1));
  key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
  // Bare words such as `open` or `y` are quoted so the value parses as TOML.
  const bool bare = !value.empty() && std::all_of(value.begin(), value.end(), [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }) && value != "true" && value != "false" && value != "inf" && value != "nan";
  if (bare) value = "\"" + value + "\"";
  apply_toml(cfg, fmt::format("{} = {}\n", key, value), "--set");
}

void validate(const ExperimentConfig& cfg) {
  const int N = cfg.num_env;
  if (N < 2) throw ConfigError(fmt::format("N: must be >= 2, got {}", N));
  if (N > kMaxEnv) throw InfeasibleSize(fmt::format("N = {} exceeds the statevector limit {}", N, kMaxEnv));
  if (cfg.times.empty()) throw ConfigError("times: at least one time is required");
  for (double t : cfg.times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError(fmt::format("times: invalid time {}", t));
  if (!std::isfinite(cfg.lambda_t0)) throw ConfigError("broadcast.lambda_t0: must be finite");
  if (std::abs(cfg.axis.norm() - 1.0) > 1e-10) throw ConfigError("broadcast.axis: must be a unit vector");
  if (cfg.propagator.krylov_dim < 2) throw ConfigError("propagator.krylov_dim: must be >= 2");
  if (!(cfg.propagator.step_dt > 0.0)) throw ConfigError("propagator.step_dt: must be positive");
  if (!(cfg.propagator.tol > 0.0)) throw ConfigError("propagator.tol: must be positive");
  if (!(cfg.delta > 0.0)) throw ConfigError("delta: must be positive");
  if (cfg.bins < 1) throw ConfigError("ensemble.bins: must be positive");
  if (!(cfg.smear_sigma > 0.0)) throw ConfigError("ldp.smear_sigma: must be positive");
  if (cfg.grid_points < 3) throw ConfigError("ldp.grid_points: must be >= 3");
  if (cfg.threads < 0) throw ConfigError("threads: must be >= 0");

  switch (cfg.experiment) {
    case Experiment::fig2:
      for (int n : {cfg.n_rate, cfg.n_rate_secondary}) {
        if (n < 1 || n > N) throw ConfigError(fmt::format("ldp.n_rate: {} outside [1, N]", n));
        if (n > FractionSpectrum::kMaxSize)
          throw InfeasibleSize(fmt::format("ldp.n_rate = {} exceeds the dense limit {}", n,
                                           FractionSpectrum::kMaxSize));
      }
      break;
    case Experiment::fig3:
      if (cfg.interp_lambdas.empty()) throw ConfigError("broadcast.lambdas: at least one value required");
      for (double l : cfg.interp_lambdas)
        if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("broadcast.lambdas: values must be positive");
      break;
    case Experiment::fig4:
      if (cfg.ensemble_mode == EnsembleMode::Kind::exhaustive && N > kMaxExhaustiveEnv)
        throw InfeasibleSize(fmt::format("exhaustive ensemble needs N <= {}, got {}; use ensemble.mode = \"sampled\"",
                                         kMaxExhaustiveEnv, N));
      break;
    default:
      break;
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  j["N"] = cfg.num_env;
  j["times"] = cfg.times;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["delta"] = cfg.delta;
  j["broadcast"] = {{"axis", {cfg.axis.x, cfg.axis.y, cfg.axis.z}},
                    {"lambda_t0", cfg.lambda_t0},
                    {"lambdas", cfg.interp_lambdas}};
  j["ising"] = {{"J", cfg.ising.J},
                {"h_x", cfg.ising.h_x},
                {"h_z", cfg.ising.h_z},
                {"boundary", cfg.ising.boundary == Boundary::periodic ? "periodic" : "open"}};
  j["ldp"] = {{"n_rate", cfg.n_rate},
              {"n_rate_secondary", cfg.n_rate_secondary},
              {"smear_sigma", cfg.smear_sigma},
              {"grid_points", cfg.grid_points}};
  j["ensemble"] = {{"mode", cfg.ensemble_mode == EnsembleMode::Kind::exhaustive ? "exhaustive" : "sampled"},
                   {"samples", cfg.ensemble_samples},
                   {"bins", cfg.bins}};
  j["propagator"] = {{"krylov_dim", cfg.propagator.krylov_dim},
                     {"step_dt", cfg.propagator.step_dt},
                     {"tol", cfg.propagator.tol},
                     {"max_steps", cfg.propagator.max_steps}};
  return j;
}

}  // namespace darwinlab
