#include "darwinlab/statevec.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "darwinlab/error.hpp"
#include "darwinlab/kernels.hpp"

namespace darwinlab {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr int kMaxQubits = 30;

void check_qubits(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits)
    throw InvalidArgument(fmt::format("qubit count {} outside [1, {}]", num_qubits, kMaxQubits));
}

}  // namespace

PureState::PureState(int num_qubits, CVector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubits(num_qubits_);
  if (amplitudes_.size() != pow2(num_qubits_))
    throw InvalidArgument(fmt::format("amplitude vector has length {}, expected 2^{} = {}",
                                      amplitudes_.size(), num_qubits_, pow2(num_qubits_)));
  const double norm = std::sqrt(kernels::norm_sq(amplitudes_));
  if (std::abs(norm - 1.0) > kNormTolerance)
    throw InvalidArgument(fmt::format("state norm {:.15g} is not 1", norm));
}

PureState PureState::normalized(int num_qubits, CVector amplitudes) {
  const double norm = std::sqrt(kernels::norm_sq(amplitudes));
  if (!(norm > 0.0)) throw InvalidArgument("cannot normalize a zero vector");
  kernels::scale(1.0 / norm, amplitudes);
  return PureState(num_qubits, std::move(amplitudes));
}

PureState PureState::basis(int num_qubits, std::uint64_t index) {
  check_qubits(num_qubits);
  if (index >= pow2(num_qubits)) throw InvalidArgument("basis index out of range");
  CVector amps(pow2(num_qubits));
  amps[index] = 1.0;
  return PureState(num_qubits, std::move(amps));
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace local {
LocalState zero() { return {1.0, 0.0}; }
LocalState one() { return {0.0, 1.0}; }
LocalState plus() { return {M_SQRT1_2, M_SQRT1_2}; }
LocalState minus() { return {M_SQRT1_2, -M_SQRT1_2}; }
LocalState plus_y() { return {M_SQRT1_2, cplx{0.0, M_SQRT1_2}}; }
LocalState minus_y() { return {M_SQRT1_2, cplx{0.0, -M_SQRT1_2}}; }
}  // namespace local

BlochVector bloch_vector(const LocalState& s) {
  const cplx coh = std::conj(s[0]) * s[1];
  return {2.0 * coh.real(), 2.0 * coh.imag(), std::norm(s[0]) - std::norm(s[1])};
}

PureState product_state(std::span<const LocalState> sites) {
  const int num_qubits = static_cast<int>(sites.size());
  check_qubits(num_qubits);
  for (std::size_t j = 0; j < sites.size(); ++j) {
    const double norm = std::norm(sites[j][0]) + std::norm(sites[j][1]);
    if (std::abs(norm - 1.0) > kNormTolerance)
      throw InvalidArgument(
          fmt::format("local state at site {} has squared norm {:.15g}", j + 1, norm));
  }
  CVector amps(pow2(num_qubits));
  amps[0] = 1.0;
  // Grow the product one site at a time: the new site is the next-higher bit.
  for (int j = 0; j < num_qubits; ++j) {
    const std::size_t half = pow2(j);
    for (std::size_t i = 0; i < half; ++i) {
      amps[i + half] = amps[i] * sites[j][1];
      amps[i] *= sites[j][0];
    }
  }
  return PureState(num_qubits, std::move(amps));
}

PureState product_state(const LocalState& site, int num_qubits) {
  check_qubits(num_qubits);
  std::vector<LocalState> sites(num_qubits, site);
  return product_state(sites);
}

cplx inner(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits())
    throw InvalidArgument(
        fmt::format("inner product of {}- and {}-qubit states", a.num_qubits(), b.num_qubits()));
  return kernels::dot(a.amplitudes(), b.amplitudes());
}

ComplexMatrix reduced_cross_matrix(const PureState& a, const PureState& b, int n) {
  if (a.num_qubits() != b.num_qubits()) throw InvalidArgument("reduced_cross_matrix: size mismatch");
  if (n < 1 || n > a.num_qubits())
    throw InvalidArgument(fmt::format("fraction size {} outside [1, {}]", n, a.num_qubits()));
  const auto dim = static_cast<Eigen::Index>(pow2(n));
  ComplexMatrix out(dim, dim);
  kernels::fraction_cross(a.amplitudes(), b.amplitudes(), n,
                          std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

ComplexMatrix complement_cross_matrix(const PureState& a, const PureState& b, int n) {
  if (a.num_qubits() != b.num_qubits())
    throw InvalidArgument("complement_cross_matrix: size mismatch");
  if (n < 0 || n > a.num_qubits())
    throw InvalidArgument(fmt::format("fraction size {} outside [0, {}]", n, a.num_qubits()));
  const auto dim = static_cast<Eigen::Index>(pow2(a.num_qubits() - n));
  ComplexMatrix out(dim, dim);
  kernels::complement_cross(a.amplitudes(), b.amplitudes(), n,
                            std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0)
    throw InvalidArgument("density matrix must be square and non-empty");
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-6)
    throw InvalidArgument(fmt::format("density matrix trace {:.12g} is not 1", trace));
  if (rho.rows() == 1) return 0.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue solver failed");
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()[i];
    if (p < -kNegativeEigenTolerance)
      throw InvalidArgument(fmt::format("density matrix has eigenvalue {:.3e}", p));
    if (p > kEigenClamp) entropy -= p * std::log(p);
  }
  // An eigenvalue a rounding error above 1 contributes a tiny negative term.
  return std::max(entropy, 0.0);
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double max_hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace darwinlab
