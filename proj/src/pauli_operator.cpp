#include "darwinlab/pauli_operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "darwinlab/error.hpp"
#include "darwinlab/kernels.hpp"

namespace darwinlab {

namespace {

constexpr int kMaxOperatorQubits = 28;

// i^k for the Y count of a string.
cplx i_power(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double parity_sign(std::uint64_t bits) { return (std::popcount(bits) & 1) ? -1.0 : 1.0; }

cplx string_phase(const PauliTerm& t) {
  return t.coeff * i_power(std::popcount(t.x_mask & t.z_mask));
}

}  // namespace

PauliTerm pauli_term(double coeff, std::initializer_list<std::pair<int, char>> factors) {
  PauliTerm t{0, 0, coeff};
  for (const auto& [bit, op] : factors) {
    if (bit < 0 || bit >= 64) throw InvalidArgument("Pauli factor bit out of range");
    const std::uint64_t m = std::uint64_t{1} << bit;
    if ((t.x_mask | t.z_mask) & m)
      throw InvalidArgument(fmt::format("Pauli string repeats bit {}", bit));
    switch (op) {
      case 'X': t.x_mask |= m; break;
      case 'Z': t.z_mask |= m; break;
      case 'Y': t.x_mask |= m; t.z_mask |= m; break;
      case 'I': break;
      default: throw InvalidArgument(fmt::format("unknown Pauli factor '{}'", op));
    }
  }
  return t;
}

PauliOperator::PauliOperator(int num_qubits, std::vector<PauliTerm> terms)
    : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxOperatorQubits)
    throw InvalidArgument(fmt::format("operator qubit count {} outside [1, {}]", num_qubits,
                                      kMaxOperatorQubits));
  const std::uint64_t valid = pow2(num_qubits) - 1;
  // Merge duplicate strings so the stored form is canonical.
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> merged;
  for (const PauliTerm& t : terms) {
    if ((t.x_mask | t.z_mask) & ~valid)
      throw InvalidArgument("Pauli term acts outside the register");
    if (!std::isfinite(t.coeff)) throw InvalidArgument("non-finite Pauli coefficient");
    merged[{t.x_mask, t.z_mask}] += t.coeff;
  }
  for (const auto& [masks, coeff] : merged)
    if (coeff != 0.0) terms_.push_back({masks.first, masks.second, coeff});

  diagonal_.assign(dim(), 0.0);
  std::map<std::uint64_t, std::vector<OffDiagonal>> by_x;
  for (const PauliTerm& t : terms_) {
    if (t.x_mask == 0) {
      for (std::uint64_t i = 0; i < dim(); ++i) diagonal_[i] += t.coeff * parity_sign(i & t.z_mask);
    } else {
      by_x[t.x_mask].push_back({t.z_mask, string_phase(t)});
    }
  }
  for (auto& [x, list] : by_x) {
    Group g{x, std::move(list), false};
    // A group of pure X strings reduces to one constant coefficient.
    if (std::all_of(g.terms.begin(), g.terms.end(), [](const OffDiagonal& t) { return t.z_mask == 0; })) {
      cplx total{};
      for (const OffDiagonal& t : g.terms) total += t.coeff;
      g.terms = {{0, total}};
      g.uniform = true;
    }
    groups_.push_back(std::move(g));
  }
}

void PauliOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim() || out.size() != dim())
    throw InvalidArgument("PauliOperator::apply: vector size mismatch");
  // Aligned output blocks: for a block [lo, lo + B) and a flip mask x the
  // sources j ^ x form another aligned block, so every pass stays in cache.
  constexpr std::uint64_t kBlock = 2048;
  const std::uint64_t block = std::min<std::uint64_t>(kBlock, dim());
  const auto blocks = static_cast<std::ptrdiff_t>(dim() / block);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::ptrdiff_t bi = 0; bi < blocks; ++bi) {
    const std::uint64_t lo = static_cast<std::uint64_t>(bi) * block;
    const std::uint64_t hi = lo + block;
    for (std::uint64_t j = lo; j < hi; ++j) out[j] = diagonal_[j] * in[j];
    for (const Group& g : groups_) {
      if (g.uniform) {
        const cplx c = g.terms.front().coeff;
        for (std::uint64_t j = lo; j < hi; ++j) out[j] += c * in[j ^ g.x_mask];
      } else {
        for (std::uint64_t j = lo; j < hi; ++j) {
          const std::uint64_t src = j ^ g.x_mask;
          cplx c{};
          for (const OffDiagonal& t : g.terms) c += parity_sign(src & t.z_mask) * t.coeff;
          out[j] += c * in[src];
        }
      }
    }
  }
}

void PauliOperator::apply_serial(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim() || out.size() != dim())
    throw InvalidArgument("PauliOperator::apply_serial: vector size mismatch");
  std::fill(out.begin(), out.end(), cplx{});
  for (const PauliTerm& t : terms_) {
    const cplx phase = string_phase(t);
    for (std::uint64_t i = 0; i < dim(); ++i)
      out[i ^ t.x_mask] += phase * parity_sign(i & t.z_mask) * in[i];
  }
}

double PauliOperator::expectation(const PureState& psi) const {
  if (psi.num_qubits() != num_qubits_) throw InvalidArgument("expectation: size mismatch");
  CVector h(dim());
  apply(psi.amplitudes(), h);
  return kernels::dot(psi.amplitudes(), h).real();
}

double PauliOperator::variance(const PureState& psi) const {
  if (psi.num_qubits() != num_qubits_) throw InvalidArgument("variance: size mismatch");
  CVector h(dim());
  apply(psi.amplitudes(), h);
  const double mean = kernels::dot(psi.amplitudes(), h).real();
  return kernels::norm_sq(h) - mean * mean;
}

ComplexMatrix PauliOperator::to_dense() const {
  if (num_qubits_ > kMaxDenseQubits)
    throw InfeasibleSize(fmt::format("dense form of a {}-qubit operator exceeds 2^{}",
                                     num_qubits_, kMaxDenseQubits));
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (const PauliTerm& t : terms_) {
    const cplx phase = string_phase(t);
    for (std::uint64_t i = 0; i < dim(); ++i)
      m(static_cast<Eigen::Index>(i ^ t.x_mask), static_cast<Eigen::Index>(i)) +=
          phase * parity_sign(i & t.z_mask);
  }
  return m;
}

PauliOperator PauliOperator::embedded(int num_qubits) const {
  if (num_qubits < num_qubits_) throw InvalidArgument("cannot embed into a smaller register");
  return PauliOperator(num_qubits, terms_);
}

}  // namespace darwinlab
