#pragma once

#include "darwinlab/pauli_operator.hpp"
#include "darwinlab/statevec.hpp"

namespace darwinlab {

struct PropagatorConfig {
  int krylov_dim = 30;
  double step_dt = 0.25;  // outer step, units of 1/J
  double tol = 1e-10;     // allowed truncation error per outer step
  int max_steps = 1'000'000;
};

/// Diagnostics of one evolve call.
struct PropagationReport {
  int steps = 0;
  int matvecs = 0;
  double error_estimate = 0.0;  // sum of per-step truncation estimates
};

/// psi(t) = exp(-i H t) psi by Lanczos propagation with full
/// re-orthogonalization. Each outer step of at most `step_dt` is halved until
/// the a posteriori error estimate is below tol * (step / step_dt). Negative t
/// runs the dynamics backwards. Thread-safe: H is only read.
PureState evolve(const PauliOperator& H, const PureState& psi, double t,
                 const PropagatorConfig& cfg = {}, PropagationReport* report = nullptr);

/// Exact exp(-i H t) psi through a full diagonalization; dim <= 2^12.
PureState evolve_dense_oracle(const PauliOperator& H, const PureState& psi, double t);

}  // namespace darwinlab
