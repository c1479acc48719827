#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "darwinlab/branches.hpp"
#include "darwinlab/hamiltonians.hpp"
#include "darwinlab/statevec.hpp"

namespace darwinlab {

/// Dense eigen-decomposition of the fraction Hamiltonian H_F on sites 1..n.
class FractionSpectrum {
 public:
  static constexpr int kMaxSize = 14;

  /// Throws InfeasibleSize for n > kMaxSize.
  FractionSpectrum(const IsingParams& p, int n);

  int size() const { return n_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  /// q(mu) = <E_mu| rho |E_mu> where rho is `state` reduced to sites 1..n.
  std::vector<double> weights(const PureState& state) const;

 private:
  int n_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

/// Process-wide cache keyed by (J, h_x, h_z, n); safe to call from any thread.
std::shared_ptr<const FractionSpectrum> fraction_spectrum(const IsingParams& p, int n);

inline constexpr int kDefaultGridPoints = 401;
inline constexpr double kDefaultSmearSigma = 0.5;

/// Smeared fraction-energy distribution p_a(eps) on a uniform grid in energy
/// per site.
struct EnergyDistribution {
  int n = 0;
  double smear_sigma = 0.0;
  std::vector<double> epsilon_grid;
  std::vector<double> density;
  // Discrete line spectrum behind the smeared density.
  std::vector<double> line_energies;
  std::vector<double> line_weights;

  /// Exact moments of the smeared mixture, in energy per site.
  double mean() const;
  double variance() const;
  /// Trapezoid moments of the sampled density.
  double grid_mean() const;
  double grid_variance() const;
};

/// Uniform grid over [min E/n - 3 sigma/n, max E/n + 3 sigma/n].
std::vector<double> energy_grid(const FractionSpectrum& spectrum, double smear_sigma,
                                int points = kDefaultGridPoints);

EnergyDistribution fraction_energy_distribution(const PureState& branch,
                                                const FractionSpectrum& spectrum,
                                                double smear_sigma = kDefaultSmearSigma,
                                                int grid_points = kDefaultGridPoints);
EnergyDistribution fraction_energy_distribution(const PureState& branch, const IsingParams& p,
                                                int n, double smear_sigma = kDefaultSmearSigma,
                                                int grid_points = kDefaultGridPoints);

/// Finite-n rate function f(eps) = -ln p(eps) / n shifted to minimum 0.
/// Grid points whose density is below 1e-300 carry +infinity.
struct RateProfile {
  std::vector<double> epsilon_grid;
  std::vector<double> f_values;
  int n_used = 0;
  double eps_typical = 0.0;
};

RateProfile rate_function(const EnergyDistribution& dist);

/// lambda(k) = (1/n) ln <Phi| exp(k H_F) |Phi>
struct CgfProfile {
  std::vector<double> k_grid;
  std::vector<double> lambda_values;
};

CgfProfile cumulant_generating(const PureState& branch, const FractionSpectrum& spectrum,
                               std::span<const double> k_grid);
CgfProfile cumulant_generating(const PureState& branch, const IsingParams& p, int n,
                               std::span<const double> k_grid);

/// g(y) = max_x (y x - f(x)) over the sampled points of f, for every y in
/// `dual_grid`. Infinite f values are skipped. Throws on an empty grid.
std::vector<double> legendre_transform(std::span<const double> grid, std::span<const double> values,
                                       std::span<const double> dual_grid);

CgfProfile legendre(const RateProfile& f, std::span<const double> k_grid);
RateProfile legendre(const CgfProfile& lambda, std::span<const double> epsilon_grid);

/// Lower convex hull of (grid, values) evaluated back on the grid.
std::vector<double> convex_hull(std::span<const double> grid, std::span<const double> values);

std::vector<double> linspace(double lo, double hi, int points);

struct RateCrossing {
  int a = 0;
  int b = 0;
  double eps_star = 0.0;
  double height = 0.0;  // f_a(eps_star) = f_b(eps_star)
};

struct AlphaStarResult {
  double alpha = 0.0;
  std::vector<RateCrossing> crossings;  // one per pair a < b
};

/// min_{a != b} min_eps max(f_a, f_b) over the linear interpolants of the
/// sampled profiles. The minimum lies on a grid point or at a sign change of
/// f_a - f_b inside a cell, which is solved exactly; for convex profiles this
/// is the crossing between the two minimizers. Finite-n profiles need not be
/// convex, so every cell is scanned. Throws on mismatched grids.
AlphaStarResult alpha_star(std::span<const RateProfile> profiles);

/// Piecewise-linear interpolation, constant beyond the grid ends.
double interpolate(std::span<const double> grid, std::span<const double> values, double x);

struct BoundCurves {
  std::vector<int> sizes;
  std::vector<double> lower;  // H_S - C exp(-alpha n)
  std::vector<double> upper;  // H_S + C exp(-alpha (N - n))
};

BoundCurves plateau_bound_curve(double h_s, double alpha, double C, int num_env,
                                std::span<const int> sizes);

/// Smallest C >= 0 with H_S - C exp(-alpha n) <= I(n) for every point of
/// the curve.
double fit_bound_constant(const MICurve& curve, double h_s, double alpha);

}  // namespace darwinlab
