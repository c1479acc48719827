#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "darwinlab/statevec.hpp"
#include "darwinlab/types.hpp"

namespace darwinlab {

/// Real multiple of a Pauli string. Site k (0-based bit) carries X if only
/// the x bit is set, Z if only the z bit is set, Y if both are set.
struct PauliTerm {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  double coeff = 0.0;
};

/// Builds a term from (bit, 'X'|'Y'|'Z') factors.
PauliTerm pauli_term(double coeff, std::initializer_list<std::pair<int, char>> factors);

/// Hermitian operator stored as a sum of real-weighted Pauli strings.
/// Matrix-vector products use bit arithmetic and never form the matrix.
class PauliOperator {
 public:
  PauliOperator(int num_qubits, std::vector<PauliTerm> terms);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return pow2(num_qubits_); }
  std::span<const PauliTerm> terms() const { return terms_; }

  /// out = H in (OpenMP gather over output amplitudes).
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// Term-by-term scatter reference for `apply`.
  void apply_serial(std::span<const cplx> in, std::span<cplx> out) const;

  double expectation(const PureState& psi) const;
  /// <psi|H^2|psi> - <psi|H|psi>^2
  double variance(const PureState& psi) const;

  /// Dense matrix, only for dim <= 2^14.
  ComplexMatrix to_dense() const;

  /// The same terms acting on a larger register (identity on the new bits).
  PauliOperator embedded(int num_qubits) const;

  static constexpr int kMaxDenseQubits = 14;

 private:
  struct OffDiagonal {
    std::uint64_t z_mask;
    cplx coeff;  // includes the i^(#Y) phase
  };
  struct Group {
    std::uint64_t x_mask;
    std::vector<OffDiagonal> terms;
    bool uniform;  // all z masks zero: terms holds one summed coefficient
  };

  int num_qubits_;
  std::vector<PauliTerm> terms_;
  std::vector<double> diagonal_;
  std::vector<Group> groups_;
};

}  // namespace darwinlab
