#include "darwinlab/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <fmt/format.h>

#include "darwinlab/error.hpp"

namespace darwinlab {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();

double trapezoid(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

void check_same_grid(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("rate profiles on grids of different length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i])))
      throw InvalidArgument("rate profiles on different grids");
}

std::size_t argmin(std::span<const double> v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

FractionSpectrum::FractionSpectrum(const IsingParams& p, int n) : n_(n) {
  if (n > kMaxSize)
    throw InfeasibleSize(fmt::format("dense H_F diagonalization limited to n <= {}, got {}", kMaxSize, n));
  const ComplexMatrix dense = build_fraction_hamiltonian(p, n).to_dense();
  if (dense.imag().cwiseAbs().maxCoeff() > 0.0)
    throw InvalidArgument("fraction Hamiltonian is expected to be real");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense.real());
  if (solver.info() != Eigen::Success) throw Error("H_F diagonalization failed");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

std::vector<double> FractionSpectrum::weights(const PureState& state) const {
  if (state.num_qubits() < n_)
    throw InvalidArgument("state smaller than the fraction");
  const auto dim = static_cast<Eigen::Index>(pow2(n_));
  const auto rest = static_cast<Eigen::Index>(state.dim() / pow2(n_));
  // Column-major reshape: M(f, r) = psi[f + 2^n r].
  Eigen::Map<const ComplexMatrix> m(state.amplitudes().data(), dim, rest);
  const Eigen::MatrixXd m_re = m.unaryExpr([](const cplx& z) { return z.real(); });
  const Eigen::MatrixXd m_im = m.unaryExpr([](const cplx& z) { return z.imag(); });
  const Eigen::MatrixXd re = vectors_.transpose() * m_re;
  const Eigen::MatrixXd im = vectors_.transpose() * m_im;
  std::vector<double> w(static_cast<std::size_t>(dim));
  for (Eigen::Index mu = 0; mu < dim; ++mu)
    w[mu] = re.row(mu).squaredNorm() + im.row(mu).squaredNorm();
  return w;
}

std::shared_ptr<const FractionSpectrum> fraction_spectrum(const IsingParams& p, int n) {
  using Key = std::tuple<double, double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const FractionSpectrum>> cache;
  const Key key{p.J, p.h_x, p.h_z, n};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  // Built outside the lock; a racing duplicate build is harmless.
  auto spectrum = std::make_shared<const FractionSpectrum>(p, n);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(spectrum)).first->second;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw InvalidArgument("linspace needs at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
  return g;
}

std::vector<double> energy_grid(const FractionSpectrum& spectrum, double smear_sigma, int points) {
  const double n = spectrum.size();
  const double lo = spectrum.energies().minCoeff() / n - 3.0 * smear_sigma / n;
  const double hi = spectrum.energies().maxCoeff() / n + 3.0 * smear_sigma / n;
  return linspace(lo, hi, points);
}

EnergyDistribution fraction_energy_distribution(const PureState& branch,
                                                const FractionSpectrum& spectrum,
                                                double smear_sigma, int grid_points) {
  if (!(smear_sigma > 0.0)) throw InvalidArgument("smear_sigma must be positive");
  EnergyDistribution dist;
  dist.n = spectrum.size();
  dist.smear_sigma = smear_sigma;
  dist.epsilon_grid = energy_grid(spectrum, smear_sigma, grid_points);
  dist.line_energies.assign(spectrum.energies().data(),
                            spectrum.energies().data() + spectrum.energies().size());
  dist.line_weights = spectrum.weights(branch);
  for (double& w : dist.line_weights) w = std::max(w, 0.0);

  const double n = dist.n;
  const double norm = n / (smear_sigma * std::sqrt(2.0 * M_PI));
  const double inv2s2 = 1.0 / (2.0 * smear_sigma * smear_sigma);
  dist.density.assign(dist.epsilon_grid.size(), 0.0);
  const auto points = static_cast<std::ptrdiff_t>(dist.epsilon_grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < points; ++i) {
    const double e = dist.epsilon_grid[i] * n;
    double s = 0.0;
    for (std::size_t mu = 0; mu < dist.line_energies.size(); ++mu) {
      const double x = e - dist.line_energies[mu];
      s += dist.line_weights[mu] * std::exp(-x * x * inv2s2);
    }
    dist.density[i] = norm * s;
  }
  const double total = trapezoid(dist.epsilon_grid, dist.density);
  if (!(total > 0.0)) throw Error("energy distribution has zero mass on its grid");
  for (double& v : dist.density) v /= total;
  return dist;
}

EnergyDistribution fraction_energy_distribution(const PureState& branch, const IsingParams& p,
                                                int n, double smear_sigma, int grid_points) {
  if (n < 1 || n > branch.num_qubits()) throw InvalidArgument("fraction size out of range");
  return fraction_energy_distribution(branch, *fraction_spectrum(p, n), smear_sigma, grid_points);
}

double EnergyDistribution::mean() const {
  double total = 0.0, first = 0.0;
  for (std::size_t mu = 0; mu < line_energies.size(); ++mu) {
    total += line_weights[mu];
    first += line_weights[mu] * line_energies[mu];
  }
  return first / total / n;
}

double EnergyDistribution::variance() const {
  double total = 0.0, first = 0.0, second = 0.0;
  for (std::size_t mu = 0; mu < line_energies.size(); ++mu) {
    total += line_weights[mu];
    first += line_weights[mu] * line_energies[mu];
    second += line_weights[mu] * line_energies[mu] * line_energies[mu];
  }
  first /= total;
  second /= total;
  return (second - first * first + smear_sigma * smear_sigma) / (static_cast<double>(n) * n);
}

double EnergyDistribution::grid_mean() const {
  std::vector<double> y(density.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = epsilon_grid[i] * density[i];
  return trapezoid(epsilon_grid, y);
}

double EnergyDistribution::grid_variance() const {
  const double m = grid_mean();
  std::vector<double> y(density.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = (epsilon_grid[i] - m) * (epsilon_grid[i] - m) * density[i];
  return trapezoid(epsilon_grid, y);
}

RateProfile rate_function(const EnergyDistribution& dist) {
  std::size_t positive = 0;
  for (double v : dist.density) positive += v >= kDensityFloor;
  if (positive < 2) throw InvalidArgument("rate function of a degenerate distribution");
  RateProfile rp;
  rp.epsilon_grid = dist.epsilon_grid;
  rp.n_used = dist.n;
  rp.f_values.resize(dist.density.size());
  for (std::size_t i = 0; i < dist.density.size(); ++i)
    rp.f_values[i] = dist.density[i] >= kDensityFloor ? -std::log(dist.density[i]) / dist.n : kInf;
  const std::size_t k = argmin(rp.f_values);
  const double shift = rp.f_values[k];
  for (double& f : rp.f_values) f -= shift;
  rp.eps_typical = rp.epsilon_grid[k];
  return rp;
}

CgfProfile cumulant_generating(const PureState& branch, const FractionSpectrum& spectrum,
                               std::span<const double> k_grid) {
  const std::vector<double> w = spectrum.weights(branch);
  const Eigen::VectorXd& e = spectrum.energies();
  const double n = spectrum.size();
  CgfProfile out;
  out.k_grid.assign(k_grid.begin(), k_grid.end());
  out.lambda_values.reserve(k_grid.size());
  double total = 0.0;
  for (double v : w) total += std::max(v, 0.0);
  for (double k : k_grid) {
    double shift = -kInf;
    for (std::size_t mu = 0; mu < w.size(); ++mu)
      if (w[mu] > 0.0) shift = std::max(shift, k * e[mu]);
    double s = 0.0;
    for (std::size_t mu = 0; mu < w.size(); ++mu)
      if (w[mu] > 0.0) s += w[mu] * std::exp(k * e[mu] - shift);
    out.lambda_values.push_back((std::log(s / total) + shift) / n);
  }
  return out;
}

CgfProfile cumulant_generating(const PureState& branch, const IsingParams& p, int n,
                               std::span<const double> k_grid) {
  if (n < 1 || n > branch.num_qubits()) throw InvalidArgument("fraction size out of range");
  return cumulant_generating(branch, *fraction_spectrum(p, n), k_grid);
}

std::vector<double> legendre_transform(std::span<const double> grid, std::span<const double> values,
                                       std::span<const double> dual_grid) {
  if (grid.empty() || dual_grid.empty()) throw InvalidArgument("Legendre transform of an empty grid");
  if (grid.size() != values.size()) throw InvalidArgument("Legendre transform: ragged input");
  std::vector<double> out(dual_grid.size(), -kInf);
  for (std::size_t j = 0; j < dual_grid.size(); ++j)
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (std::isfinite(values[i])) out[j] = std::max(out[j], dual_grid[j] * grid[i] - values[i]);
  return out;
}

CgfProfile legendre(const RateProfile& f, std::span<const double> k_grid) {
  CgfProfile out;
  out.k_grid.assign(k_grid.begin(), k_grid.end());
  out.lambda_values = legendre_transform(f.epsilon_grid, f.f_values, k_grid);
  return out;
}

RateProfile legendre(const CgfProfile& lambda, std::span<const double> epsilon_grid) {
  RateProfile out;
  out.epsilon_grid.assign(epsilon_grid.begin(), epsilon_grid.end());
  out.f_values = legendre_transform(lambda.k_grid, lambda.lambda_values, epsilon_grid);
  out.eps_typical = out.epsilon_grid[argmin(out.f_values)];
  return out;
}

std::vector<double> convex_hull(std::span<const double> grid, std::span<const double> values) {
  // Andrew's monotone chain, lower half, over finite points.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(values[i])) continue;
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2], q = hull.back();
      const double cross = (grid[q] - grid[p]) * (values[i] - values[p]) -
                           (values[q] - values[p]) * (grid[i] - grid[p]);
      if (cross <= 0.0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::vector<double> out(grid.size(), kInf);
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t p = hull[h], q = hull[h + 1];
    for (std::size_t i = p; i <= q; ++i)
      out[i] = values[p] + (values[q] - values[p]) * (grid[i] - grid[p]) / (grid[q] - grid[p]);
  }
  if (hull.size() == 1) out[hull[0]] = values[hull[0]];
  return out;
}

double interpolate(std::span<const double> grid, std::span<const double> values, double x) {
  if (x <= grid.front()) return values.front();
  if (x >= grid.back()) return values.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin());
  const double t = (x - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

AlphaStarResult alpha_star(std::span<const RateProfile> profiles) {
  if (profiles.size() < 2) throw InvalidArgument("alpha_star needs at least two rate profiles");
  for (const RateProfile& p : profiles) check_same_grid(profiles.front().epsilon_grid, p.epsilon_grid);
  const auto& grid = profiles.front().epsilon_grid;
  AlphaStarResult result;
  result.alpha = kInf;
  for (std::size_t a = 0; a < profiles.size(); ++a)
    for (std::size_t b = a + 1; b < profiles.size(); ++b) {
      const auto& fa = profiles[a].f_values;
      const auto& fb = profiles[b].f_values;
      // Minimum of max(f_a, f_b) over the piecewise-linear interpolants: on
      // each cell it sits at an end point or where f_a - f_b changes sign.
      RateCrossing best{static_cast<int>(a), static_cast<int>(b), grid.front(), kInf};
      auto consider = [&](double eps, double height) {
        if (height < best.height) {
          best.eps_star = eps;
          best.height = height;
        }
      };
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(fa[i]) || !std::isfinite(fb[i])) continue;
        consider(grid[i], std::max(fa[i], fb[i]));
        if (i + 1 == grid.size() || !std::isfinite(fa[i + 1]) || !std::isfinite(fb[i + 1])) continue;
        const double g0 = fa[i] - fb[i], g1 = fa[i + 1] - fb[i + 1];
        if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
          const double t = g0 / (g0 - g1);
          consider(grid[i] + t * (grid[i + 1] - grid[i]), fa[i] + t * (fa[i + 1] - fa[i]));
        }
      }
      result.crossings.push_back(best);
      result.alpha = std::min(result.alpha, best.height);
    }
  return result;
}

BoundCurves plateau_bound_curve(double h_s, double alpha, double C, int num_env,
                                std::span<const int> sizes) {
  if (!(alpha > 0.0) || !(C > 0.0)) throw InvalidArgument("plateau bound needs alpha > 0 and C > 0");
  BoundCurves out;
  out.sizes.assign(sizes.begin(), sizes.end());
  for (int n : sizes) {
    out.lower.push_back(h_s - C * std::exp(-alpha * n));
    out.upper.push_back(h_s + C * std::exp(-alpha * (num_env - n)));
  }
  return out;
}

double fit_bound_constant(const MICurve& curve, double h_s, double alpha) {
  double c = 0.0;
  for (std::size_t i = 0; i < curve.sizes.size(); ++i)
    c = std::max(c, (h_s - curve.values[i]) * std::exp(alpha * curve.sizes[i]));
  return c;
}

}  // namespace darwinlab
