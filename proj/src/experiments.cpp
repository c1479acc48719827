#include "darwinlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>

#include <fmt/format.h>
#include <omp.h>

#include "darwinlab/ensembles.hpp"
#include "darwinlab/error.hpp"
#include "darwinlab/ldp.hpp"

#ifndef DARWINLAB_VERSION
#define DARWINLAB_VERSION "dev"
#endif

namespace darwinlab {

namespace {

constexpr double kPurityTolerance = 1e-7;
constexpr double kBoundSlack = 1e-8;

class Csv {
 public:
  explicit Csv(std::string_view header) : body_(fmt::format("{}\n", header)) {}

  template <typename... Args>
  void row(fmt::format_string<Args...> f, Args&&... args) {
    body_ += fmt::format(f, std::forward<Args>(args)...);
    body_ += '\n';
  }

  std::string str() && { return std::move(body_); }

 private:
  std::string body_;
};

void say(std::ostream* log, const std::string& msg) {
  if (log) *log << msg << std::endl;
}

std::vector<double> sorted_times(const ExperimentConfig& cfg) {
  std::vector<double> t = cfg.times;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

BroadcastSpec broadcast_spec(const ExperimentConfig& cfg, const BlochVector& axis) {
  BroadcastSpec spec;
  spec.axis = axis;
  spec.lambda_t0 = cfg.lambda_t0;
  return spec;
}

IsingParams env_params(const ExperimentConfig& cfg) {
  IsingParams p = cfg.ising;
  p.num_sites = cfg.num_env;
  return p;
}

struct TimedCurve {
  double time;
  MICurve curve;
  double h_s;
};

// Evolves `bs` through the ascending `times`, measuring a full MI curve at each.
std::vector<TimedCurve> curves_over_time(BranchedState bs, const PauliOperator& H,
                                         const std::vector<double>& times,
                                         const PropagatorConfig& prop, std::ostream* log,
                                         const std::string& label) {
  std::vector<TimedCurve> out;
  double now = 0.0;
  for (double t : times) {
    if (t > now) {
      bs = evolve_branches(bs, H, t - now, prop);
      now = t;
    }
    MICurve curve = mutual_information_curve(bs);
    curve.time = t;
    curve.preparation = label;
    const double h_s = system_entropy(bs);
    check_curve_invariants(curve, h_s, bs.system_dim());
    say(log, fmt::format("  [{}] t = {:g}: I(1) = {:.4f}, I(N/2) = {:.4f}, H(S) = {:.6f}", label, t,
                         curve.values.front(), curve.values[curve.values.size() / 2 - 1], h_s));
    out.push_back({t, std::move(curve), h_s});
  }
  return out;
}

std::string mi_curves_csv(const std::vector<TimedCurve>& curves) {
  Csv csv("t,n,I_nats");
  for (const TimedCurve& tc : curves)
    for (std::size_t i = 0; i < tc.curve.sizes.size(); ++i)
      csv.row("{:.12g},{},{:.12g}", tc.time, tc.curve.sizes[i], tc.curve.values[i]);
  return std::move(csv).str();
}

nlohmann::json curve_metadata(const std::vector<TimedCurve>& curves, double delta) {
  nlohmann::json list = nlohmann::json::array();
  for (const TimedCurve& tc : curves) {
    nlohmann::json item = {{"t", tc.time}, {"H_S", tc.h_s}};
    if (delta < tc.h_s) item["R_delta"] = redundancy_number(tc.curve, tc.h_s, delta);
    else item["R_delta"] = nullptr;
    list.push_back(item);
  }
  return list;
}

// Runs body(i) for i in [0, count) across OpenMP threads and rethrows the
// first failure on the calling thread.
template <typename Body>
void parallel_items(std::ptrdiff_t count, Body&& body) {
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(darwinlab_item_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

void check_curve_invariants(const MICurve& curve, double h_s, int system_dim) {
  const double cap = 2.0 * std::log(static_cast<double>(system_dim));
  std::map<int, double> by_size;
  for (std::size_t i = 0; i < curve.sizes.size(); ++i) {
    const double v = curve.values[i];
    if (!(v >= -kBoundSlack && v <= 2.0 * h_s + kPurityTolerance && v <= cap + kBoundSlack))
      throw InvariantViolation(fmt::format("I({}) = {:.10g} outside [0, 2 H(S) = {:.10g}]",
                                           curve.sizes[i], v, 2.0 * h_s));
    by_size[curve.sizes[i]] = v;
  }
  const int N = curve.num_env;
  for (const auto& [n, v] : by_size) {
    const double partner = n == N ? 0.0 : (by_size.count(N - n) ? by_size.at(N - n) : NAN);
    if (std::isnan(partner)) continue;
    if (std::abs(v + partner - 2.0 * h_s) > kPurityTolerance)
      throw InvariantViolation(fmt::format("purity identity broken at n = {}: I(n) + I(N-n) = {:.12g}, 2 H(S) = {:.12g}",
                                           n, v + partner, 2.0 * h_s));
  }
}

BranchedState partial_degeneracy_state(int num_env) {
  const double c = 1.0 / std::sqrt(3.0);
  std::vector<PureState> branches;
  branches.push_back(product_state(local::plus_y(), num_env));
  branches.push_back(product_state(local::zero(), num_env));
  branches.push_back(product_state(local::minus_y(), num_env));
  return from_branches({c, c, c}, std::move(branches));
}

double partial_plateau_value() {
  // Branches 0 and 2 share an energy density: merged weights {2/3, 1/3}.
  const std::vector<double> merged{2.0 / 3.0, 1.0 / 3.0};
  return shannon_entropy(merged);
}

ExperimentOutput experiment_mi_curves(const ExperimentConfig& cfg, std::ostream* log) {
  const IsingParams p = env_params(cfg);
  const PauliOperator H = build_ising_chain(p);
  const BroadcastSpec spec = broadcast_spec(cfg, cfg.axis);
  const BranchedState bs = prepare_broadcast(spec, cfg.num_env);
  say(log, fmt::format("{}: N = {}, axis = ({:g}, {:g}, {:g}), lambda t0 = {:.6f}",
                       to_string(cfg.experiment), cfg.num_env, cfg.axis.x, cfg.axis.y, cfg.axis.z,
                       cfg.lambda_t0));
  const auto curves = curves_over_time(bs, H, sorted_times(cfg), cfg.propagator, log,
                                       std::string(to_string(cfg.experiment)));
  ExperimentOutput out;
  out.files["mi_curves.csv"] = mi_curves_csv(curves);
  std::vector<double> eps;
  for (int a = 0; a < 2; ++a)
    eps.push_back(H.expectation(bs.branch(a)) / cfg.num_env);
  out.metadata["branch_energy_density"] = eps;
  out.metadata["curves"] = curve_metadata(curves, cfg.delta);
  return out;
}

ExperimentOutput experiment_fig2(const ExperimentConfig& cfg, std::ostream* log) {
  const IsingParams p = env_params(cfg);
  const PauliOperator H = build_ising_chain(p);
  const BranchedState bs0 = prepare_broadcast(broadcast_spec(cfg, cfg.axis), cfg.num_env);
  const double t = sorted_times(cfg).back();
  say(log, fmt::format("fig2: N = {}, evolving to t = {:g}", cfg.num_env, t));
  const BranchedState bs = evolve_branches(bs0, H, t, cfg.propagator);

  MICurve curve = mutual_information_curve(bs);
  curve.time = t;
  const double h_s = system_entropy(bs);
  check_curve_invariants(curve, h_s, bs.system_dim());

  ExperimentOutput out;
  nlohmann::json rates = nlohmann::json::object();
  double alpha = 0.0;
  for (int n : {cfg.n_rate, cfg.n_rate_secondary}) {
    say(log, fmt::format("  diagonalizing H_F for n = {}", n));
    const auto spectrum = fraction_spectrum(p, n);
    std::vector<RateProfile> profiles;
    for (int a = 0; a < bs.system_dim(); ++a)
      profiles.push_back(rate_function(
          fraction_energy_distribution(bs.branch(a), *spectrum, cfg.smear_sigma, cfg.grid_points)));
    const AlphaStarResult star = alpha_star(profiles);
    nlohmann::json crossings = nlohmann::json::array();
    for (const RateCrossing& c : star.crossings)
      crossings.push_back({{"a", c.a}, {"b", c.b}, {"eps_star", c.eps_star}, {"height", c.height}});
    std::vector<double> typical;
    for (const RateProfile& r : profiles) typical.push_back(r.eps_typical);
    rates[std::to_string(n)] = {{"alpha_star", star.alpha}, {"crossings", crossings}, {"eps_typical", typical}};
    say(log, fmt::format("  n = {}: alpha* = {:.5f}", n, star.alpha));

    Csv csv("branch,epsilon,f");
    for (std::size_t a = 0; a < profiles.size(); ++a)
      for (std::size_t i = 0; i < profiles[a].epsilon_grid.size(); ++i)
        if (std::isfinite(profiles[a].f_values[i]))
          csv.row("{},{:.12g},{:.12g}", a, profiles[a].epsilon_grid[i], profiles[a].f_values[i]);
    const std::string name = n == cfg.n_rate ? "rate_functions.csv" : fmt::format("rate_functions_n{}.csv", n);
    out.files[name] = std::move(csv).str();
    if (n == cfg.n_rate) alpha = star.alpha;
  }

  const double C = fit_bound_constant(curve, h_s, alpha);
  Csv bound("n,I_nats,lower_env,upper_env");
  if (alpha > 0.0 && C > 0.0) {
    const BoundCurves env = plateau_bound_curve(h_s, alpha, C, cfg.num_env, curve.sizes);
    for (std::size_t i = 0; i < curve.sizes.size(); ++i)
      bound.row("{},{:.12g},{:.12g},{:.12g}", curve.sizes[i], curve.values[i], env.lower[i], env.upper[i]);
  } else {
    for (std::size_t i = 0; i < curve.sizes.size(); ++i)
      bound.row("{},{:.12g},{:.12g},{:.12g}", curve.sizes[i], curve.values[i], h_s, h_s);
  }
  out.files["bound.csv"] = std::move(bound).str();

  const int n_max = std::min({cfg.num_env, cfg.n_rate, FractionSpectrum::kMaxSize});
  Csv dephased("n,I_nats,I_classical_nats");
  for (int n = 1; n <= n_max; ++n) {
    const double classical = classical_dephased_mi(bs, n, p);
    const double quantum = curve.values[n - 1];
    if (classical > quantum + kBoundSlack)
      throw InvariantViolation(fmt::format("dephased MI {:.12g} exceeds quantum MI {:.12g} at n = {}",
                                           classical, quantum, n));
    dephased.row("{},{:.12g},{:.12g}", n, quantum, classical);
  }
  out.files["dephased_mi.csv"] = std::move(dephased).str();

  out.metadata["t"] = t;
  out.metadata["H_S"] = h_s;
  out.metadata["H_S_dephased"] = dephased_system_entropy(bs);
  out.metadata["alpha_star"] = alpha;
  out.metadata["C_fit"] = C;
  out.metadata["rate_estimates"] = rates;
  if (cfg.delta < h_s) out.metadata["R_delta"] = redundancy_number(curve, h_s, cfg.delta);
  return out;
}

ExperimentOutput experiment_fig3(const ExperimentConfig& cfg, std::ostream* log) {
  const IsingParams p = env_params(cfg);
  const PauliOperator H = build_ising_chain(p);
  const double t = sorted_times(cfg).back();
  const auto& lambdas = cfg.interp_lambdas;
  std::vector<MICurve> curves(lambdas.size());
  std::vector<double> delta_eps(lambdas.size());
  say(log, fmt::format("fig3: N = {}, t = {:g}, {} interpolation values", cfg.num_env, t, lambdas.size()));
  parallel_items(static_cast<std::ptrdiff_t>(lambdas.size()), [&](std::ptrdiff_t i) {
    const BroadcastSpec spec = broadcast_spec(cfg, interpolated_axis(lambdas[i]));
    const BranchedState bs = evolve_branches(prepare_broadcast(spec, cfg.num_env), H, t, cfg.propagator);
    curves[i] = mutual_information_curve(bs);
    curves[i].time = t;
    check_curve_invariants(curves[i], system_entropy(bs), 2);
    delta_eps[i] = 0.5 * std::abs(product_energy_density(bloch_vector(broadcast_local_state(spec, 0)), p) -
                                  product_energy_density(bloch_vector(broadcast_local_state(spec, 1)), p));
  });
  Csv csv("lambda,n,x_scaled,I_nats");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    say(log, fmt::format("  lambda = {:g}: I(1) = {:.4f}", lambdas[i], curves[i].values.front()));
    for (std::size_t k = 0; k < curves[i].sizes.size(); ++k) {
      const int n = curves[i].sizes[k];
      csv.row("{:.12g},{},{:.12g},{:.12g}", lambdas[i], n, lambdas[i] * lambdas[i] * n, curves[i].values[k]);
    }
  }
  ExperimentOutput out;
  out.files["collapse.csv"] = std::move(csv).str();
  out.metadata["t"] = t;
  out.metadata["lambdas"] = lambdas;
  out.metadata["delta_epsilon"] = delta_eps;
  return out;
}

ExperimentOutput experiment_fig4(const ExperimentConfig& cfg, std::ostream* log) {
  const IsingParams p = env_params(cfg);
  const PauliOperator H = build_ising_chain(p);
  const double t = sorted_times(cfg).back();
  const std::vector<std::pair<std::string, BlochVector>> preps{{"encoding", {0.0, 0.0, 1.0}},
                                                              {"redundancy", {0.0, 1.0, 0.0}}};
  const EnsembleMode mode = cfg.ensemble_mode == EnsembleMode::Kind::exhaustive
                                ? EnsembleMode::exhaustive()
                                : EnsembleMode::sampled(cfg.seed, cfg.ensemble_samples);
  std::vector<Histogram> hists(preps.size());
  std::vector<nlohmann::json> meta(preps.size());
  say(log, fmt::format("fig4: N = {}, t = {:g}", cfg.num_env, t));
  parallel_items(static_cast<std::ptrdiff_t>(preps.size()), [&](std::ptrdiff_t i) {
    const BranchedState bs =
        evolve_branches(prepare_broadcast(broadcast_spec(cfg, preps[i].second), cfg.num_env), H, t, cfg.propagator);
    const ProjectiveEnsemble ens = projective_ensemble(bs, mode);
    hists[i] = pointer_histogram(ens, cfg.bins);
    meta[i] = {{"tv_to_uniform", total_variation_to_uniform(hists[i])},
               {"mass_abs_z_above_0.9", pointer_mass_beyond(ens, 0.9)},
               {"outcomes", ens.size()}};
    if (mode.kind == EnsembleMode::Kind::exhaustive) {
      const double defect = (ens.mixture() - system_density_matrix(bs)).cwiseAbs().maxCoeff();
      if (defect > 1e-8)
        throw InvariantViolation(fmt::format("ensemble mixture differs from rho_S by {:.3e}", defect));
      meta[i]["mixture_defect"] = defect;
    }
  });
  Csv csv("prep,N,bin_left,bin_right,mass");
  ExperimentOutput out;
  for (std::size_t i = 0; i < preps.size(); ++i) {
    for (std::size_t b = 0; b < hists[i].mass.size(); ++b)
      csv.row("{},{},{:.12g},{:.12g},{:.12g}", preps[i].first, cfg.num_env, hists[i].edges[b],
              hists[i].edges[b + 1], hists[i].mass[b]);
    out.metadata[preps[i].first] = meta[i];
    say(log, fmt::format("  {}: TV to uniform = {:.4f}", preps[i].first, meta[i]["tv_to_uniform"].get<double>()));
  }
  out.files["pointer_hist.csv"] = std::move(csv).str();
  out.metadata["t"] = t;
  return out;
}

ExperimentOutput experiment_fig5(const ExperimentConfig& cfg, std::ostream* log) {
  const IsingParams p = env_params(cfg);
  const PauliOperator H = build_ising_chain(p);
  const BranchedState bs = partial_degeneracy_state(cfg.num_env);
  say(log, fmt::format("fig5: N = {}, three branches", cfg.num_env));
  const auto curves = curves_over_time(bs, H, sorted_times(cfg), cfg.propagator, log, "fig5");
  ExperimentOutput out;
  out.files["mi_curves.csv"] = mi_curves_csv(curves);
  std::vector<double> eps;
  for (int a = 0; a < 3; ++a) eps.push_back(H.expectation(bs.branch(a)) / cfg.num_env);
  out.metadata["branch_energy_density"] = eps;
  out.metadata["plateau_reference_s"] = partial_plateau_value();
  out.metadata["initial_plateau"] = std::log(3.0);
  out.metadata["curves"] = curve_metadata(curves, cfg.delta);
  return out;
}

ExperimentOutput compute(const ExperimentConfig& cfg, std::ostream* log) {
  validate(cfg);
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  switch (cfg.experiment) {
    case Experiment::fig1a:
    case Experiment::fig1b:
    case Experiment::sweep: return experiment_mi_curves(cfg, log);
    case Experiment::fig2: return experiment_fig2(cfg, log);
    case Experiment::fig3: return experiment_fig3(cfg, log);
    case Experiment::fig4: return experiment_fig4(cfg, log);
    case Experiment::fig5: return experiment_fig5(cfg, log);
  }
  throw ConfigError("unhandled experiment");
}

RunResult run(const ExperimentConfig& cfg, std::ostream* log) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = iso_timestamp();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw ConfigError(fmt::format("output_dir: cannot create {}: {}", cfg.output_dir.string(), ec.message()));

  ExperimentOutput output = compute(cfg, log);

  RunResult result;
  result.output_dir = cfg.output_dir;
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& [name, body] : output.files) {
    const auto path = cfg.output_dir / name;
    std::ofstream f(path, std::ios::binary);
    f << body;
    if (!f) throw Error(fmt::format("failed writing {}", path.string()));
    hashes[name] = fnv1a_hex(body);
    result.files.push_back(path);
  }
  const nlohmann::json config = to_json(cfg);
  result.manifest = {
      {"tool", "darwinlab"},
      {"version", DARWINLAB_VERSION},
      {"eigen_version", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
      {"openmp_threads", omp_get_max_threads()},
      {"config", config},
      {"config_hash", fnv1a_hex(config.dump())},
      {"output_hashes", hashes},
      {"metadata", output.metadata},
      {"started_at", started_at},
      {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()},
  };
  const auto manifest_path = cfg.output_dir / "manifest.json";
  std::ofstream mf(manifest_path);
  mf << result.manifest.dump(2) << '\n';
  if (!mf) throw Error(fmt::format("failed writing {}", manifest_path.string()));
  result.files.push_back(manifest_path);
  return result;
}

}  // namespace darwinlab
