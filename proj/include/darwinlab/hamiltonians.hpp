#pragma once

#include <cstdint>
#include <vector>

#include "darwinlab/pauli_operator.hpp"
#include "darwinlab/statevec.hpp"

namespace darwinlab {

enum class Boundary { periodic, open };

/// H = -sum_j (J Z_j Z_{j+1} + h_x X_j + h_z Z_j).
struct IsingParams {
  int num_sites = 16;
  double J = 1.0;
  double h_x = 0.945;
  double h_z = 1.205;
  Boundary boundary = Boundary::periodic;
};

/// Broadcast preparation: every environment qubit is rotated by the
/// interaction -lambda Z_S sum_j axis.sigma_j for a time with lambda t0 =
/// `lambda_t0`.
struct BroadcastSpec {
  BlochVector axis{0.0, 0.0, 1.0};
  double lambda_t0 = M_PI / 4.0;
  std::vector<cplx> coefficients{M_SQRT1_2, M_SQRT1_2};

  int system_dim() const { return static_cast<int>(coefficients.size()); }
};

/// Axis Z cos(lambda pi / 2) + Y sin(lambda pi / 2), interpolating between the
/// degenerate (lambda = 0) and generic (lambda = 1) broadcasts.
BlochVector interpolated_axis(double lambda);

struct AllToAllParams {
  int num_sites = 8;
  std::uint64_t seed = 0;
};

PauliOperator build_ising_chain(const IsingParams& p);

/// Open chain on sites 1..n holding only the terms fully inside the
/// fraction: n-1 bonds and n field terms.
PauliOperator build_fraction_hamiltonian(const IsingParams& p, int n);

/// -coupling Z_S sum_j axis.sigma_j on N+1 qubits; the system is the highest
/// bit. Requires a two-level system.
PauliOperator build_broadcast_interaction(const BroadcastSpec& spec, int num_env,
                                          double coupling = 1.0);

/// Standard normal coupling J^alpha_{jk} (alpha 0 = x, 1 = z). Keyed by
/// (seed, j, k, alpha) only, so it does not depend on iteration order.
double all_to_all_coupling(std::uint64_t seed, int j, int k, int alpha);

/// (1/sqrt N) sum_{j<k} (J^x_jk X_j X_k + J^z_jk Z_j Z_k)
PauliOperator build_all_to_all(const AllToAllParams& p);

/// Energy per site of a translation-invariant product state with Bloch
/// vector m on a periodic chain: -(J m_z^2 + h_x m_x + h_z m_z).
double product_energy_density(const BlochVector& m, const IsingParams& p);

}  // namespace darwinlab
