#pragma once

// Independent reference constructions for the tests: Kronecker-product
// operators, dense propagation, and entropies from singular values of the
// full system+environment statevector.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "darwinlab/branches.hpp"
#include "darwinlab/hamiltonians.hpp"
#include "darwinlab/statevec.hpp"

namespace oracle {

using darwinlab::cplx;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat pauli(char c) {
  Mat m(2, 2);
  const cplx I(0, 1);
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -I, I, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m = Mat::Identity(2, 2);
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Product of single-site operators; ops[j] acts on qubit j (bit j), so the
// Kronecker chain runs from the highest qubit down.
inline Mat string_op(const std::vector<Mat>& ops) {
  Mat out = Mat::Identity(1, 1);
  for (int j = static_cast<int>(ops.size()) - 1; j >= 0; --j) out = kron(out, ops[j]);
  return out;
}

// Single Pauli factors at the given sites, identity elsewhere.
inline Mat pauli_string(int N, std::vector<std::pair<int, char>> factors) {
  std::vector<Mat> ops(N, Mat::Identity(2, 2));
  for (auto [site, c] : factors) ops[site] = ops[site] * pauli(c);
  return string_op(ops);
}

inline Mat ising(int N, double J, double hx, double hz, bool periodic) {
  const int dim = 1 << N;
  Mat H = Mat::Zero(dim, dim);
  const int bonds = periodic ? N : N - 1;
  for (int j = 0; j < bonds; ++j) H -= J * pauli_string(N, {{j, 'Z'}, {(j + 1) % N, 'Z'}});
  for (int j = 0; j < N; ++j) {
    H -= hx * pauli_string(N, {{j, 'X'}});
    H -= hz * pauli_string(N, {{j, 'Z'}});
  }
  return H;
}

inline Mat to_eigen(const Eigen::MatrixXcd& m) { return m; }

inline Vec to_vec(const darwinlab::PureState& s) {
  Vec v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i) v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline Vec evolve(const Mat& H, const Vec& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const Eigen::VectorXd& e = es.eigenvalues();
  Vec phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases[i] = std::exp(cplx(0, -t * e[i]));
  return es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

inline double entropy_of_probs(const Eigen::VectorXd& p) {
  double h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 1e-14) h -= p[i] * std::log(p[i]);
  return h;
}

// Entropy of the row party of a bipartite pure state given as a matrix.
inline double schmidt_entropy(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return entropy_of_probs(svd.singularValues().cwiseAbs2());
}

// Full statevector of sum_a c_a |a>_S |Phi_a>, system index above the N
// environment bits: Psi[e + 2^N a].
inline Vec full_state(const darwinlab::BranchedState& bs) {
  const Eigen::Index D = static_cast<Eigen::Index>(bs.branch(0).dim());
  Vec psi(D * bs.system_dim());
  for (int a = 0; a < bs.system_dim(); ++a)
    for (Eigen::Index e = 0; e < D; ++e)
      psi[e + D * a] = bs.coefficients()[a] * bs.branch(a)[static_cast<std::size_t>(e)];
  return psi;
}

// H(F), H(S), H(FS) for F = environment sites 1..n, by SVD of reshaped Psi.
struct Entropies {
  double f, s, fs;
  double mi() const { return f + s - fs; }
};

inline Entropies full_space_entropies(const darwinlab::BranchedState& bs, int n) {
  const Vec psi = full_state(bs);
  const int N = bs.num_env();
  const Eigen::Index d = bs.system_dim();
  const Eigen::Index F = Eigen::Index{1} << n, R = Eigen::Index{1} << (N - n);
  Mat mf(F, R * d), ms(d, F * R), mfs(F * d, R);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index r = 0; r < R; ++r)
      for (Eigen::Index f = 0; f < F; ++f) {
        const cplx v = psi[f + F * r + F * R * a];
        mf(f, r + R * a) = v;
        ms(a, f + F * r) = v;
        mfs(f + F * a, r) = v;
      }
  return {schmidt_entropy(mf), schmidt_entropy(ms), schmidt_entropy(mfs)};
}

inline darwinlab::PureState random_state(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  darwinlab::CVector v(std::size_t{1} << N);
  for (cplx& z : v) z = {g(rng), g(rng)};
  return darwinlab::PureState::normalized(N, std::move(v));
}

inline darwinlab::BranchedState random_branched(int N, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(d);
  double norm = 0;
  for (cplx& z : c) {
    z = {g(rng), g(rng)};
    norm += std::norm(z);
  }
  for (cplx& z : c) z /= std::sqrt(norm);
  std::vector<darwinlab::PureState> branches;
  for (int a = 0; a < d; ++a) branches.push_back(random_state(N, rng));
  return darwinlab::from_branches(std::move(c), std::move(branches));
}

}  // namespace oracle
