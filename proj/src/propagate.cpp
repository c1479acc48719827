#include "darwinlab/propagate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "darwinlab/error.hpp"
#include "darwinlab/kernels.hpp"

namespace darwinlab {

namespace {

constexpr int kMaxHalvings = 40;
constexpr double kHappyBreakdown = 1e-13;

// exp(-i tau T) e_1 for the real symmetric tridiagonal T.
struct TridiagonalExp {
  Eigen::VectorXd evals;
  Eigen::MatrixXd Q;

  TridiagonalExp(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index k = 0; k < m; ++k) T(k, k) = alpha[k];
    for (Eigen::Index k = 0; k + 1 < m; ++k) T(k, k + 1) = T(k + 1, k) = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    evals = eig.eigenvalues();
    Q = eig.eigenvectors();
  }

  Eigen::VectorXcd apply(double tau) const {
    const auto m = evals.size();
    Eigen::VectorXcd phases(m);
    for (Eigen::Index k = 0; k < m; ++k) phases[k] = std::polar(Q(0, k), -tau * evals[k]);
    return Q.cast<cplx>() * phases;
  }
};

}  // namespace

PureState evolve(const PauliOperator& H, const PureState& psi, double t,
                 const PropagatorConfig& cfg, PropagationReport* report) {
  if (H.num_qubits() != psi.num_qubits())
    throw InvalidArgument(fmt::format("evolve: operator on {} qubits, state on {}",
                                      H.num_qubits(), psi.num_qubits()));
  if (cfg.krylov_dim < 2) throw InvalidArgument("krylov_dim must be >= 2");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("propagator tolerance must be positive");
  if (!(cfg.step_dt > 0.0)) throw InvalidArgument("step_dt must be positive");
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");

  PropagationReport rep;
  const std::size_t dim = psi.dim();
  CVector state(psi.amplitudes().begin(), psi.amplitudes().end());
  const double direction = t < 0.0 ? -1.0 : 1.0;
  double remaining = std::abs(t);
  const int max_dim = static_cast<int>(std::min<std::size_t>(cfg.krylov_dim, dim));

  std::vector<CVector> basis;
  basis.reserve(max_dim);
  CVector w(dim);
  std::vector<double> alpha, beta;

  while (remaining > 0.0) {
    if (rep.steps >= cfg.max_steps)
      throw ConvergenceError(fmt::format("evolve: exceeded max_steps = {}", cfg.max_steps),
                             rep.error_estimate);
    double tau = std::min(cfg.step_dt, remaining);
    auto allowed = [&](double step) { return cfg.tol * step / cfg.step_dt; };

    kernels::scale(1.0 / std::sqrt(kernels::norm_sq(state)), state);
    basis.clear();
    alpha.clear();
    beta.clear();
    basis.push_back(state);

    // Lanczos recurrence plus one full re-orthogonalization pass. Stops as
    // soon as the error estimate for the full step is within tolerance.
    double residual = 0.0;
    for (int j = 0;; ++j) {
      H.apply(basis[j], w);
      ++rep.matvecs;
      alpha.push_back(kernels::dot(basis[j], w).real());
      kernels::axpy(-alpha.back(), basis[j], w);
      if (j > 0) kernels::axpy(-beta.back(), basis[j - 1], w);
      for (const CVector& v : basis) kernels::axpy(-kernels::dot(v, w), v, w);
      const double b = std::sqrt(kernels::norm_sq(w));
      if (b < kHappyBreakdown) {
        residual = 0.0;
        break;
      }
      residual = b;
      if (j + 1 == max_dim) break;
      if (j >= 3) {
        const TridiagonalExp probe(alpha, beta);
        const Eigen::VectorXcd c = probe.apply(direction * tau);
        if (residual * std::abs(c[c.size() - 1]) <= allowed(tau)) break;
      }
      beta.push_back(b);
      kernels::scale(1.0 / b, w);
      basis.push_back(w);
    }

    const TridiagonalExp texp(alpha, beta);
    Eigen::VectorXcd coeffs;
    double err = 0.0;
    for (int halving = 0;; ++halving) {
      coeffs = texp.apply(direction * tau);
      err = residual * std::abs(coeffs[coeffs.size() - 1]);
      if (err <= allowed(tau)) break;
      if (halving == kMaxHalvings)
        throw ConvergenceError(
            fmt::format("evolve: Krylov error estimate {:.3e} above tolerance {:.3e} at step {:.3e}",
                        err, allowed(tau), tau),
            err);
      tau *= 0.5;
    }

    std::fill(state.begin(), state.end(), cplx{});
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) kernels::axpy(coeffs[k], basis[k], state);
    remaining = remaining - tau <= 1e-14 * std::abs(t) ? 0.0 : remaining - tau;
    rep.error_estimate += err;
    ++rep.steps;
  }
  if (report) *report = rep;
  return PureState::normalized(psi.num_qubits(), std::move(state));
}

PureState evolve_dense_oracle(const PauliOperator& H, const PureState& psi, double t) {
  constexpr int kMaxOracleQubits = 12;
  if (H.num_qubits() > kMaxOracleQubits)
    throw InfeasibleSize(fmt::format("dense propagation oracle limited to 2^{}", kMaxOracleQubits));
  if (H.num_qubits() != psi.num_qubits()) throw InvalidArgument("evolve_dense_oracle: size mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(H.to_dense());
  const ComplexMatrix& V = eig.eigenvectors();
  Eigen::Map<const Eigen::VectorXcd> in(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dim()));
  Eigen::VectorXcd proj = V.adjoint() * in;
  for (Eigen::Index k = 0; k < proj.size(); ++k)
    proj[k] *= std::polar(1.0, -t * eig.eigenvalues()[k]);
  Eigen::VectorXcd out = V * proj;
  return PureState::normalized(psi.num_qubits(), CVector(out.data(), out.data() + out.size()));
}

}  // namespace darwinlab
