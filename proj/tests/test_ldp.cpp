#include <algorithm>
#include <random>

#include <doctest.h>

#include "darwinlab/branches.hpp"
#include "darwinlab/error.hpp"
#include "darwinlab/ldp.hpp"
#include "oracles.hpp"

using namespace darwinlab;

namespace {

IsingParams chain(int N) {
  IsingParams p;
  p.num_sites = N;
  return p;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

RateProfile parabola(const std::vector<double>& grid, double center) {
  RateProfile r;
  r.epsilon_grid = grid;
  for (double e : grid) r.f_values.push_back(0.5 * (e - center) * (e - center));
  r.eps_typical = center;
  return r;
}

BranchedState y_broadcast_evolved(int N, double t) {
  BroadcastSpec spec;
  spec.axis = {0.0, 1.0, 0.0};
  spec.lambda_t0 = 0.75 * M_PI / 4;
  return evolve_branches(prepare_broadcast(spec, N), build_ising_chain(chain(N)), t);
}

}  // namespace

TEST_CASE("fraction spectrum is diagonalized once and cached") {
  const auto a = fraction_spectrum(chain(8), 5);
  const auto b = fraction_spectrum(chain(8), 5);
  CHECK(a.get() == b.get());
  CHECK(a->energies().size() == 32);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::ising(5, 1.0, 0.945, 1.205, false));
  CHECK((a->energies() - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(FractionSpectrum(chain(16), 15), InfeasibleSize);
}

TEST_CASE("single-site distribution of |0>") {
  const IsingParams p = chain(4);
  const PureState zero = product_state(local::zero(), 4);
  const EnergyDistribution d = fraction_energy_distribution(zero, p, 1, 0.1, 801);
  const double r = std::hypot(p.h_x, p.h_z);
  REQUIRE(d.line_energies.size() == 2);
  CHECK(d.line_energies[0] == doctest::Approx(-r));
  CHECK(d.line_energies[1] == doctest::Approx(r));
  // <E_-|0>|^2 for H = -(h_x X + h_z Z): ground state aligned with the field.
  const double cos_theta = p.h_z / r;
  CHECK(d.line_weights[0] == doctest::Approx(0.5 * (1 + cos_theta)).epsilon(1e-12));
  CHECK(d.line_weights[1] == doctest::Approx(0.5 * (1 - cos_theta)).epsilon(1e-12));
  // Peak positions on the grid.
  const auto peak = std::max_element(d.density.begin(), d.density.end()) - d.density.begin();
  CHECK(d.epsilon_grid[peak] == doctest::Approx(-r).epsilon(0.01));
}

TEST_CASE("distribution normalization and moments") {
  const int N = 12;
  const BranchedState bs = y_broadcast_evolved(N, 4.0);
  const IsingParams p = chain(N);
  for (int n : {4, 8, 10}) {
    const PauliOperator Hn = build_fraction_hamiltonian(p, n).embedded(N);
    for (int a = 0; a < 2; ++a) {
      const EnergyDistribution d = fraction_energy_distribution(bs.branch(a), p, n, 0.5);
      CHECK(trapezoid(d.epsilon_grid, d.density) == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(*std::min_element(d.density.begin(), d.density.end()) >= 0.0);
      const double e = Hn.expectation(bs.branch(a)), v = Hn.variance(bs.branch(a));
      CHECK(std::abs(d.mean() - e / n) < 1e-6);
      CHECK(std::abs(d.variance() - v / (n * n)) < 1e-6 + 0.25);
      CHECK(std::abs(d.variance() - (v + 0.25) / (n * n)) < 1e-9);
      CHECK(std::abs(d.grid_mean() - e / n) < 1e-3);
    }
  }
  CHECK_THROWS_AS(fraction_energy_distribution(bs.branch(0), p, 4, 0.0), InvalidArgument);
}

TEST_CASE("rate function of a Gaussian density") {
  const int n = 10;
  const double sigma = 0.3, mean = -0.4;
  EnergyDistribution d;
  d.n = n;
  d.smear_sigma = sigma;
  d.epsilon_grid = linspace(-1.5, 0.7, 401);
  const double s2 = sigma * sigma / n;
  for (double e : d.epsilon_grid) d.density.push_back(std::exp(-(e - mean) * (e - mean) / (2 * s2)) / std::sqrt(2 * M_PI * s2));
  const RateProfile r = rate_function(d);
  const double h = d.epsilon_grid[1] - d.epsilon_grid[0];
  CHECK(std::abs(r.eps_typical - mean) <= h);
  CHECK(*std::min_element(r.f_values.begin(), r.f_values.end()) == 0.0);
  for (std::size_t i = 0; i < r.f_values.size(); ++i) {
    const double e = d.epsilon_grid[i];
    if (std::abs(e - mean) < 0.6) {
      const double want = (e - mean) * (e - mean) / (2 * sigma * sigma) -
                          (r.eps_typical - mean) * (r.eps_typical - mean) / (2 * sigma * sigma);
      CHECK(r.f_values[i] == doctest::Approx(want).epsilon(1e-9));
    }
  }
  EnergyDistribution spike = d;
  std::fill(spike.density.begin(), spike.density.end(), 0.0);
  spike.density[10] = 1.0;
  CHECK_THROWS_AS(rate_function(spike), InvalidArgument);
}

TEST_CASE("rate functions of the Y broadcast have distinct minimizers") {
  const int N = 12;
  const BranchedState bs = y_broadcast_evolved(N, 8.0);
  const auto spectrum = fraction_spectrum(chain(N), 8);
  std::vector<RateProfile> r;
  for (int a = 0; a < 2; ++a) r.push_back(rate_function(fraction_energy_distribution(bs.branch(a), *spectrum)));
  CHECK(std::abs(r[0].eps_typical - r[1].eps_typical) > 1.0);
  for (const RateProfile& f : r) {
    CHECK(*std::min_element(f.f_values.begin(), f.f_values.end()) == 0.0);
    for (double v : f.f_values) CHECK(v >= 0.0);
  }
  const AlphaStarResult star = alpha_star(r);
  REQUIRE(star.crossings.size() == 1);
  const RateCrossing& c = star.crossings[0];
  // At n = 8 the profiles are not convex, so the lowest point of
  // max(f_0, f_1) need not be a crossing; it is still the reported height.
  CHECK(std::max(interpolate(r[0].epsilon_grid, r[0].f_values, c.eps_star),
                 interpolate(r[1].epsilon_grid, r[1].f_values, c.eps_star)) == doctest::Approx(c.height).epsilon(1e-9));
  CHECK(star.alpha == doctest::Approx(c.height));
  // alpha* is the lowest point of max(f_0, f_1) on the grid, up to one cell.
  double grid_min = 1e300;
  for (std::size_t i = 0; i < r[0].f_values.size(); ++i) grid_min = std::min(grid_min, std::max(r[0].f_values[i], r[1].f_values[i]));
  CHECK(star.alpha <= grid_min + 1e-12);
  CHECK(star.alpha > 0.0);
}

TEST_CASE("cumulant generating function") {
  const int N = 10;
  const BranchedState bs = y_broadcast_evolved(N, 3.0);
  const IsingParams p = chain(N);
  const std::vector<double> k = linspace(-2.0, 2.0, 401);
  const CgfProfile lam = cumulant_generating(bs.branch(0), p, 6, k);
  CHECK(std::abs(lam.lambda_values[200]) < 1e-9);
  const double h = k[1] - k[0];
  const double slope = (lam.lambda_values[201] - lam.lambda_values[199]) / (2 * h);
  const double mean = build_fraction_hamiltonian(p, 6).embedded(N).expectation(bs.branch(0)) / 6;
  CHECK(slope == doctest::Approx(mean).epsilon(1e-4));
  for (std::size_t i = 1; i + 1 < k.size(); ++i)
    CHECK(lam.lambda_values[i + 1] - 2 * lam.lambda_values[i] + lam.lambda_values[i - 1] >= -1e-12);
  // Large |k| must not overflow.
  const std::vector<double> big{-400.0, 400.0};
  for (double v : cumulant_generating(bs.branch(0), p, 6, big).lambda_values) CHECK(std::isfinite(v));
}

TEST_CASE("Legendre transforms") {
  SUBCASE("quadratic is self-dual") {
    RateProfile f = parabola(linspace(-4.0, 4.0, 801), 0.0);
    const std::vector<double> k = linspace(-2.0, 2.0, 81);
    const CgfProfile lam = legendre(f, k);
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(lam.lambda_values[i] == doctest::Approx(k[i] * k[i] / 2).epsilon(1e-4));
  }
  SUBCASE("affine input has its dual minimum at the slope") {
    RateProfile f;
    f.epsilon_grid = linspace(-1.0, 1.0, 201);
    for (double e : f.epsilon_grid) f.f_values.push_back(2 * e);
    const std::vector<double> k = linspace(0.0, 4.0, 401);
    const CgfProfile lam = legendre(f, k);
    const auto it = std::min_element(lam.lambda_values.begin(), lam.lambda_values.end());
    CHECK(k[it - lam.lambda_values.begin()] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(lam.lambda_values.front() == doctest::Approx(2.0));
  }
  SUBCASE("double transform returns the convex hull") {
    const std::vector<double> grid = linspace(-2.0, 2.0, 401);
    RateProfile f;
    f.epsilon_grid = grid;
    for (double e : grid) f.f_values.push_back(std::min((e + 1) * (e + 1), (e - 1) * (e - 1) + 0.3) + 0.1 * std::sin(9 * e));
    const std::vector<double> hull = convex_hull(grid, f.f_values);
    double slope = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      slope = std::max(slope, std::abs(hull[i] - hull[i - 1]) / (grid[i] - grid[i - 1]));
    const std::vector<double> k = linspace(-slope, slope, 4001);
    const RateProfile back = legendre(legendre(f, k), grid);
    const double h = grid[1] - grid[0];
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(back.f_values[i] - hull[i]) <= 2 * h * slope);
    // Idempotent on a convex input.
    const RateProfile again = legendre(legendre(back, k), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(again.f_values[i] - back.f_values[i]) <= 2 * h * slope);
  }
  SUBCASE("empty grid") {
    const std::vector<double> none;
    CHECK_THROWS_AS(legendre_transform(none, none, std::vector<double>{1.0}), InvalidArgument);
  }
}

TEST_CASE("Legendre transform of the generating function tracks the rate function") {
  const int N = 12, n = 10;
  const BranchedState bs = y_broadcast_evolved(N, 8.0);
  const auto spectrum = fraction_spectrum(chain(N), n);
  // Branch 1 sits in the middle of the H_F spectrum. Branch 0 sits at its
  // lower edge, where the n = 10 density still resolves individual levels and
  // is not convex, so duality is not expected there.
  const EnergyDistribution d = fraction_energy_distribution(bs.branch(1), *spectrum);
  const RateProfile f = rate_function(d);
  const std::vector<double> k = linspace(-6.0, 6.0, 1201);
  const RateProfile dual = legendre(cumulant_generating(bs.branch(1), *spectrum, k), f.epsilon_grid);
  const double shift = *std::min_element(dual.f_values.begin(), dual.f_values.end());
  const double sd = std::sqrt(d.variance());
  double worst = 0;
  int points = 0;
  for (std::size_t i = 0; i < f.epsilon_grid.size(); ++i)
    if (std::abs(f.epsilon_grid[i] - d.mean()) <= sd) {
      worst = std::max(worst, std::abs(f.f_values[i] - (dual.f_values[i] - shift)));
      ++points;
    }
  CHECK(points > 50);
  CHECK(worst < 0.02);
}

TEST_CASE("alpha* for synthetic profiles") {
  const std::vector<double> grid = linspace(-3.0, 3.0, 601);
  const std::vector<RateProfile> sym{parabola(grid, -1.0), parabola(grid, 1.0)};
  const AlphaStarResult r = alpha_star(sym);
  CHECK(std::abs(r.alpha - 0.5) < 1e-3);
  CHECK(std::abs(r.crossings[0].eps_star) < 1e-3);
  // Off-grid crossing of convex profiles: f_0 = f_1 = alpha there.
  const std::vector<RateProfile> shifted{parabola(grid, -1.0037), parabola(grid, 0.9)};
  const AlphaStarResult s = alpha_star(shifted);
  const RateCrossing& c = s.crossings[0];
  CHECK(std::abs(interpolate(grid, shifted[0].f_values, c.eps_star) - s.alpha) < 1e-3);
  CHECK(std::abs(interpolate(grid, shifted[1].f_values, c.eps_star) - s.alpha) < 1e-3);
  CHECK(c.eps_star == doctest::Approx((-1.0037 + 0.9) / 2).epsilon(1e-3));
  const std::vector<RateProfile> same{parabola(grid, 0.3), parabola(grid, 0.3)};
  CHECK(alpha_star(same).alpha == doctest::Approx(0.0));
  const std::vector<RateProfile> three{parabola(grid, -1.0), parabola(grid, 0.0), parabola(grid, 2.0)};
  const AlphaStarResult t = alpha_star(three);
  CHECK(t.crossings.size() == 3);
  CHECK(t.alpha == doctest::Approx(0.125).epsilon(1e-3));
  const std::vector<RateProfile> mismatched{parabola(grid, 0.0), parabola(linspace(-3.0, 3.0, 600), 1.0)};
  CHECK_THROWS_AS(alpha_star(mismatched), InvalidArgument);
}

TEST_CASE("plateau bound curves and the fitted constant") {
  const std::vector<int> sizes{1, 2, 3, 4, 5, 6, 7, 8};
  const double hs = std::log(2.0);
  const BoundCurves b = plateau_bound_curve(hs, 0.4, 0.7, 8, sizes);
  CHECK(hs - b.lower[3] == doctest::Approx(b.upper[3] - hs));
  const BoundCurves tight = plateau_bound_curve(hs, 200.0, 0.7, 8, sizes);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    CHECK(tight.lower[i] == doctest::Approx(hs));
    CHECK(tight.upper[i] == doctest::Approx(hs));
  }
  CHECK_THROWS_AS(plateau_bound_curve(hs, 0.0, 1.0, 8, sizes), InvalidArgument);
  CHECK_THROWS_AS(plateau_bound_curve(hs, 1.0, 0.0, 8, sizes), InvalidArgument);

  MICurve c;
  c.num_env = 8;
  c.sizes = sizes;
  for (int n : sizes) c.values.push_back(hs - 0.5 * std::exp(-0.3 * n) * (1 + 0.1 * (n % 3)));
  const double alpha = 0.3;
  const double C = fit_bound_constant(c, hs, alpha);
  bool tight_somewhere = false;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double lower = hs - C * std::exp(-alpha * sizes[i]);
    CHECK(lower <= c.values[i] + 1e-12);
    tight_somewhere |= std::abs(lower - c.values[i]) < 1e-12;
  }
  CHECK(tight_somewhere);
}

TEST_CASE("energy splitting of the interpolated broadcast is linear in lambda") {
  const IsingParams p = chain(16);
  auto split = [&](double lambda) {
    BroadcastSpec spec;
    spec.axis = interpolated_axis(lambda);
    spec.lambda_t0 = 0.75 * M_PI / 4;
    return 0.5 * std::abs(product_energy_density(bloch_vector(broadcast_local_state(spec, 0)), p) -
                          product_energy_density(bloch_vector(broadcast_local_state(spec, 1)), p));
  };
  const double slope0 = split(1e-5) / 1e-5;
  for (double lambda : {0.05, 0.1, 0.2}) CHECK(std::abs(split(lambda) / lambda / slope0 - 1.0) < 0.05);
  CHECK(split(0.0) < 1e-15);
}
