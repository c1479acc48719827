#include <algorithm>
#include <numeric>
#include <random>

#include <doctest.h>

#include "darwinlab/branches.hpp"
#include "darwinlab/ensembles.hpp"
#include "darwinlab/error.hpp"
#include "oracles.hpp"

using namespace darwinlab;

namespace {

IsingParams chain(int N) {
  IsingParams p;
  p.num_sites = N;
  return p;
}

BranchedState evolved_broadcast(int N, BlochVector axis, double t) {
  BroadcastSpec spec;
  spec.axis = axis;
  spec.lambda_t0 = 0.75 * M_PI / 4;
  return evolve_branches(prepare_broadcast(spec, N), build_ising_chain(chain(N)), t);
}

double mass_sum(const Histogram& h) { return std::accumulate(h.mass.begin(), h.mass.end(), 0.0); }

}  // namespace

TEST_CASE("perfectly correlated branches") {
  const int N = 5;
  const BranchedState bs = from_branches({M_SQRT1_2, M_SQRT1_2}, {product_state(local::zero(), N), product_state(local::one(), N)});
  const ProjectiveEnsemble ens = projective_ensemble(bs, EnsembleMode::exhaustive());
  REQUIRE(ens.size() == 2);
  CHECK(ens.probability(0) == doctest::Approx(0.5));
  CHECK(ens.probability(1) == doctest::Approx(0.5));
  CHECK(std::abs(std::abs(ens.state(0)[0]) - 1.0) < 1e-14);
  CHECK(std::abs(std::abs(ens.state(1)[1]) - 1.0) < 1e-14);
  const Histogram h = pointer_histogram(ens, 64);
  CHECK(h.mass.front() == doctest::Approx(0.5));
  CHECK(h.mass.back() == doctest::Approx(0.5));
  CHECK(pointer_mass_beyond(ens, 0.9) == doctest::Approx(1.0));
}

TEST_CASE("unbranched state always yields |0>") {
  std::mt19937_64 rng(1);
  const BranchedState bs = from_branches({1.0, 0.0}, {oracle::random_state(6, rng), oracle::random_state(6, rng)});
  const ProjectiveEnsemble ens = projective_ensemble(bs, EnsembleMode::exhaustive());
  CHECK(ens.size() == 64);
  for (std::size_t i = 0; i < ens.size(); ++i) CHECK(std::abs(std::abs(ens.state(i)[0]) - 1.0) < 1e-12);
  const Histogram h = pointer_histogram(ens, 16);
  CHECK(h.mass.back() == doctest::Approx(1.0));
}

TEST_CASE("mixture identity at N = 10, t = 8") {
  for (BlochVector axis : {BlochVector{0, 0, 1}, BlochVector{0, 1, 0}}) {
    const BranchedState bs = evolved_broadcast(10, axis, 8.0);
    const ProjectiveEnsemble ens = projective_ensemble(bs, EnsembleMode::exhaustive());
    CHECK((ens.mixture() - system_density_matrix(bs)).cwiseAbs().maxCoeff() < 1e-8);
    double total = 0;
    for (double p : ens.probabilities()) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    const Histogram h = pointer_histogram(ens);
    CHECK(mass_sum(h) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(h.edges.front() == -1.0);
    CHECK(h.edges.back() == 1.0);
    CHECK(h.edges.size() == 65);
  }
}

TEST_CASE("three-level mixture identity") {
  std::mt19937_64 rng(2);
  const BranchedState bs = oracle::random_branched(6, 3, rng);
  const ProjectiveEnsemble ens = projective_ensemble(bs, EnsembleMode::exhaustive());
  CHECK((ens.mixture() - system_density_matrix(bs)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(pointer_histogram(ens), InvalidArgument);
}

TEST_CASE("sampled mode converges to the exhaustive histogram") {
  const BranchedState bs = evolved_broadcast(10, {0, 0, 1}, 8.0);
  const Histogram exact = pointer_histogram(projective_ensemble(bs, EnsembleMode::exhaustive()));
  const ProjectiveEnsemble sampled = projective_ensemble(bs, EnsembleMode::sampled(42, 100000));
  CHECK(sampled.size() == 100000);
  const auto probs = sampled.probabilities();
  CHECK(std::all_of(probs.begin(), probs.end(), [](double p) { return p == 1e-5; }));
  CHECK(total_variation(exact, pointer_histogram(sampled)) < 0.02);
}

TEST_CASE("sampled mode is reproducible from the seed") {
  const BranchedState bs = evolved_broadcast(8, {0, 1, 0}, 2.0);
  const ProjectiveEnsemble a = projective_ensemble(bs, EnsembleMode::sampled(7, 500));
  const ProjectiveEnsemble b = projective_ensemble(bs, EnsembleMode::sampled(7, 500));
  const ProjectiveEnsemble c = projective_ensemble(bs, EnsembleMode::sampled(8, 500));
  bool all_equal = true, any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    all_equal &= a.state(i)[0] == b.state(i)[0] && a.state(i)[1] == b.state(i)[1];
    any_diff |= a.state(i)[0] != c.state(i)[0];
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK_THROWS_AS(projective_ensemble(bs, EnsembleMode::sampled(1, 0)), InvalidArgument);
}

TEST_CASE("histogram distances") {
  Histogram u{{-1, 0, 1}, {0.5, 0.5}};
  Histogram spike{{-1, 0, 1}, {1.0, 0.0}};
  CHECK(total_variation_to_uniform(u) == 0.0);
  CHECK(total_variation_to_uniform(spike) == doctest::Approx(0.5));
  CHECK(total_variation(u, spike) == doctest::Approx(0.5));
  Histogram other{{-1, -0.5, 0, 0.5, 1}, {0.25, 0.25, 0.25, 0.25}};
  CHECK_THROWS_AS(total_variation(u, other), InvalidArgument);
}
