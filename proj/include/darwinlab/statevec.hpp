#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "darwinlab/types.hpp"

namespace darwinlab {

/// Normalized pure state of N qubits. Site j (1-based) is bit j-1 of the
/// basis index.
class PureState {
 public:
  /// Takes ownership of `amplitudes`. Throws InvalidArgument if the length is
  /// not 2^N or the norm deviates from 1 by more than 1e-10.
  PureState(int num_qubits, CVector amplitudes);

  /// Rescales `amplitudes` to unit norm first. Throws on a zero vector.
  static PureState normalized(int num_qubits, CVector amplitudes);
  static PureState basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const cplx> amplitudes() const { return amplitudes_; }
  cplx operator[](std::size_t i) const { return amplitudes_[i]; }

 private:
  int num_qubits_;
  CVector amplitudes_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
};

/// Single-qubit amplitudes (alpha, beta) for alpha|0> + beta|1>.
using LocalState = std::array<cplx, 2>;

namespace local {
LocalState zero();
LocalState one();
LocalState plus();
LocalState minus();
LocalState plus_y();
LocalState minus_y();
}  // namespace local

BlochVector bloch_vector(const LocalState& s);

/// Tensor product of one local state per site (site 1 first).
PureState product_state(std::span<const LocalState> sites);
/// The same local state on all N sites.
PureState product_state(const LocalState& site, int num_qubits);

/// <a|b>
cplx inner(const PureState& a, const PureState& b);

/// rho_ab = Tr_{sites n+1..N} |a><b|, a 2^n x 2^n matrix with trace <b|a>.
ComplexMatrix reduced_cross_matrix(const PureState& a, const PureState& b, int n);

/// Tr_{sites 1..n} |a><b|, a 2^(N-n) x 2^(N-n) matrix on the complement of
/// the fraction. n = N gives the 1x1 matrix <b|a>.
ComplexMatrix complement_cross_matrix(const PureState& a, const PureState& b, int n);

/// Eigenvalues in [-1e-8, 1e-12] are clamped to zero.
inline constexpr double kEigenClamp = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-8;

/// Von Neumann entropy in nats. Throws InvalidArgument if the trace deviates
/// from 1 by more than 1e-6 or an eigenvalue is below -1e-8.
double von_neumann_entropy(const ComplexMatrix& rho);

/// -sum p ln p over a probability vector, with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

double max_hermiticity_defect(const ComplexMatrix& m);

}  // namespace darwinlab
