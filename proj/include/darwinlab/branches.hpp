#pragma once

#include <span>
#include <string>
#include <vector>

#include "darwinlab/hamiltonians.hpp"
#include "darwinlab/propagate.hpp"
#include "darwinlab/statevec.hpp"

namespace darwinlab {

class FractionSpectrum;

/// sum_a c_a |a>_S |Phi_a>_E with d >= 2 branches on a common environment.
class BranchedState {
 public:
  /// Throws InvalidArgument unless sum |c_a|^2 = 1 within 1e-10, there is
  /// one branch per coefficient, and all branches have the same size.
  BranchedState(std::vector<cplx> coefficients, std::vector<PureState> branches);

  int system_dim() const { return static_cast<int>(coefficients_.size()); }
  int num_env() const { return branches_.front().num_qubits(); }
  std::span<const cplx> coefficients() const { return coefficients_; }
  const std::vector<PureState>& branches() const { return branches_; }
  const PureState& branch(int a) const { return branches_.at(static_cast<std::size_t>(a)); }
  double weight(int a) const { return std::norm(coefficients_.at(static_cast<std::size_t>(a))); }

 private:
  std::vector<cplx> coefficients_;
  std::vector<PureState> branches_;
};

BranchedState from_branches(std::vector<cplx> coefficients, std::vector<PureState> branches);

/// Single-qubit factor of branch a: exp(i lambda_t0 s_a axis.sigma)|+> with
/// s_a = (-1)^a, i.e. exp(-i H_int t0) acting on |a>_S |+>.
LocalState broadcast_local_state(const BroadcastSpec& spec, int a);

/// Branches (broadcast_local_state(spec, a))^{x N}, environment started in |+>^N.
BranchedState prepare_broadcast(const BroadcastSpec& spec, int num_env);

/// Evolves every branch with the same exp(-i H t); coefficients unchanged.
BranchedState evolve_branches(const BranchedState& bs, const PauliOperator& H, double t,
                              const PropagatorConfig& cfg = {});

/// (a, b) entry c_a c_b^* <Phi_b|Phi_a>.
ComplexMatrix system_density_matrix(const BranchedState& bs);

double system_entropy(const BranchedState& bs);

/// H'(S) = -sum_a |c_a|^2 ln |c_a|^2
double dephased_system_entropy(const BranchedState& bs);

struct EntropyTriple {
  double fraction = 0.0;         // H(F)
  double system = 0.0;           // H(S)
  double system_fraction = 0.0;  // H(FS)
};

/// Entropies of F (sites 1..n), S and FS. Large fractions are handled through
/// the complement: H(F) = H(S, E\F) and H(FS) = H(E\F), so no dense matrix
/// exceeds d * 2^ceil(N/2).
EntropyTriple fraction_entropies(const BranchedState& bs, int n);

/// I(F, S) = H(F) + H(S) - H(FS) in nats, clamped to [0, 2 ln d]. Values
/// below -1e-8 raise InvariantViolation.
double mutual_information(const BranchedState& bs, int n);

struct MICurve {
  std::vector<int> sizes;
  std::vector<double> values;  // nats
  double time = 0.0;
  int num_env = 0;
  std::string preparation;
};

/// mutual_information for every n in `sizes`; the n loop runs in parallel.
MICurve mutual_information_curve(const BranchedState& bs, std::span<const int> sizes);
/// Sizes 1..N.
MICurve mutual_information_curve(const BranchedState& bs);

/// Shannon mutual information between the system label a ~ |c_a|^2 and the
/// eigen-index mu of H_F with law <E_mu|rho_aa|E_mu>. A lower bound on
/// mutual_information by data processing.
double classical_dephased_mi(const BranchedState& bs, const FractionSpectrum& spectrum);
double classical_dephased_mi(const BranchedState& bs, int n, const IsingParams& p);

/// N / n_min with n_min the smallest size whose MI reaches h_s - delta; 0 if
/// none does.
double redundancy_number(const MICurve& curve, double h_s, double delta);

}  // namespace darwinlab
