#include <random>

#include <doctest.h>

#include "darwinlab/error.hpp"
#include "darwinlab/statevec.hpp"
#include "oracles.hpp"

using namespace darwinlab;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

PureState bell() {
  return PureState(2, {kInvSqrt2, 0.0, 0.0, kInvSqrt2});
}

}  // namespace

TEST_CASE("product states") {
  SUBCASE("|0> replicated") {
    const PureState s = product_state(local::zero(), 3);
    CHECK(s[0] == cplx(1.0));
    for (std::size_t i = 1; i < 8; ++i) CHECK(s[i] == cplx(0.0));
  }
  SUBCASE("|+> replicated") {
    const PureState s = product_state(local::plus(), 2);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(s[i] - 0.5) < 1e-15);
  }
  SUBCASE("|+y> on one qubit") {
    const PureState s = product_state(local::plus_y(), 1);
    CHECK(std::abs(s[0] - kInvSqrt2) < 1e-15);
    CHECK(std::abs(s[1] - cplx(0, kInvSqrt2)) < 1e-15);
  }
  SUBCASE("site ordering: first site is bit 0") {
    const std::vector<LocalState> sites{local::one(), local::zero(), local::zero()};
    CHECK(std::abs(product_state(sites)[1] - 1.0) < 1e-15);
  }
  SUBCASE("unnormalized local pair is rejected") {
    CHECK_THROWS_AS(product_state(LocalState{1.0, 1.0}, 2), InvalidArgument);
  }
}

TEST_CASE("constructor invariants") {
  CHECK_THROWS_AS(PureState(2, {1.0, 0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(PureState(1, {1.0, 1.0}), InvalidArgument);
  CHECK_NOTHROW(PureState(1, {0.6, cplx(0, 0.8)}));
}

TEST_CASE("inner products") {
  std::mt19937_64 rng(1);
  const PureState a = oracle::random_state(5, rng), b = oracle::random_state(5, rng);
  CHECK(std::abs(inner(a, a) - 1.0) < 1e-12);
  CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-15);
  CHECK(std::abs(inner(PureState::basis(1, 0), PureState::basis(1, 1))) == 0.0);
  const cplx v = inner(product_state(local::plus(), 1), product_state(local::plus_y(), 1));
  CHECK(std::abs(v - cplx(0.5, 0.5)) < 1e-15);
  CHECK_THROWS_AS(inner(a, oracle::random_state(4, rng)), InvalidArgument);
}

TEST_CASE("reduced cross matrices") {
  SUBCASE("product state gives the projector onto its n-site factor") {
    const std::vector<LocalState> sites{local::plus(), local::plus_y(), local::zero(), local::minus()};
    const PureState s = product_state(sites);
    const ComplexMatrix rho = reduced_cross_matrix(s, s, 2);
    const oracle::Vec f = oracle::to_vec(product_state(std::span(sites).first(2)));
    CHECK((rho - f * f.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("Bell pair reduces to the maximally mixed qubit") {
    const ComplexMatrix rho = reduced_cross_matrix(bell(), bell(), 1);
    CHECK((rho - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("|0>^2 with |+>^2 has trace 1/2") {
    const PureState a = product_state(local::zero(), 2), b = product_state(local::plus(), 2);
    const ComplexMatrix rho = reduced_cross_matrix(a, b, 1);
    CHECK(std::abs(rho.trace() - 0.5) < 1e-15);
    // Direct outer product of the four amplitudes traced over qubit 2.
    ComplexMatrix ref = ComplexMatrix::Zero(2, 2);
    for (int f = 0; f < 2; ++f)
      for (int g = 0; g < 2; ++g)
        for (int r = 0; r < 2; ++r) ref(f, g) += a[f + 2 * r] * std::conj(b[g + 2 * r]);
    CHECK((rho - ref).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("out of range") {
    CHECK_THROWS_AS(reduced_cross_matrix(bell(), bell(), 0), InvalidArgument);
    CHECK_THROWS_AS(reduced_cross_matrix(bell(), bell(), 3), InvalidArgument);
  }
}

TEST_CASE("reduction properties on random states") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const int N = 3 + trial;
    const PureState a = oracle::random_state(N, rng), b = oracle::random_state(N, rng);
    for (int n = 1; n <= N; ++n) {
      const ComplexMatrix ab = reduced_cross_matrix(a, b, n);
      const ComplexMatrix ba = reduced_cross_matrix(b, a, n);
      CHECK(std::abs(ab.trace() - inner(b, a)) < 1e-10);
      CHECK((ab - ba.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      if (n < N) {
        const double h = von_neumann_entropy(reduced_cross_matrix(a, a, n));
        const double hc = von_neumann_entropy(complement_cross_matrix(a, a, n));
        CHECK(h == doctest::Approx(hc).epsilon(1e-8));
      }
    }
    const ComplexMatrix full = reduced_cross_matrix(a, a, N);
    const oracle::Vec v = oracle::to_vec(a);
    CHECK((full - v * v.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("complement reduction of a product state") {
  const std::vector<LocalState> sites{local::plus(), local::one(), local::plus_y()};
  const PureState s = product_state(sites);
  const ComplexMatrix rho = complement_cross_matrix(s, s, 1);
  const oracle::Vec rest = oracle::to_vec(product_state(std::span(sites).subspan(1)));
  CHECK((rho - rest * rest.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(complement_cross_matrix(s, s, 3)(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(0.5 * ComplexMatrix::Identity(2, 2)) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const oracle::Vec v = oracle::Vec::Constant(4, 0.5);
  CHECK(std::abs(von_neumann_entropy(v * v.adjoint())) < 1e-12);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  CHECK(von_neumann_entropy(d) == doctest::Approx(0.5623351446188083).epsilon(1e-12));
  CHECK_THROWS_AS(von_neumann_entropy(0.5 * ComplexMatrix::Identity(3, 3)), InvalidArgument);
  ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(von_neumann_entropy(neg), InvalidArgument);
  ComplexMatrix tiny = ComplexMatrix::Zero(2, 2);
  tiny(0, 0) = 1.0 + 1e-9;
  tiny(1, 1) = -1e-9;
  CHECK(von_neumann_entropy(tiny) >= -1e-10);
}

TEST_CASE("Shannon entropy and Bloch vectors") {
  const std::vector<double> p{0.5, 0.5, 0.0};
  CHECK(shannon_entropy(p) == doctest::Approx(std::log(2.0)));
  const BlochVector m = bloch_vector(local::plus_y());
  CHECK(std::abs(m.y - 1.0) < 1e-15);
  CHECK(std::abs(m.norm() - 1.0) < 1e-12);
  const BlochVector z = bloch_vector(local::zero());
  CHECK(z.z == doctest::Approx(1.0));
}
