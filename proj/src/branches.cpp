#include "darwinlab/branches.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "darwinlab/error.hpp"
#include "darwinlab/ldp.hpp"

namespace darwinlab {

namespace {

constexpr double kCoefficientTolerance = 1e-10;
constexpr double kNegativeMiSlack = 1e-8;

ComplexMatrix weighted_sum(const BranchedState& bs, const std::vector<ComplexMatrix>& diag) {
  ComplexMatrix out = ComplexMatrix::Zero(diag.front().rows(), diag.front().cols());
  for (int a = 0; a < bs.system_dim(); ++a) out += bs.weight(a) * diag[a];
  return out;
}

// Blocks c_a c_b^* X_ab with X_ab = cross(a, b); X_ba = X_ab^dagger.
template <typename Cross>
ComplexMatrix block_matrix(const BranchedState& bs, Eigen::Index block, Cross&& cross,
                           std::vector<ComplexMatrix>* diagonal_blocks) {
  const int d = bs.system_dim();
  ComplexMatrix out(d * block, d * block);
  const auto c = bs.coefficients();
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      ComplexMatrix x = cross(bs.branch(a), bs.branch(b));
      const cplx w = c[a] * std::conj(c[b]);
      out.block(a * block, b * block, block, block) = w * x;
      if (a != b) {
        out.block(b * block, a * block, block, block) = std::conj(w) * x.adjoint();
      } else if (diagonal_blocks) {
        (*diagonal_blocks)[a] = std::move(x);
      }
    }
  return out;
}

}  // namespace

BranchedState::BranchedState(std::vector<cplx> coefficients, std::vector<PureState> branches)
    : coefficients_(std::move(coefficients)), branches_(std::move(branches)) {
  if (coefficients_.size() < 2)
    throw InvalidArgument(fmt::format("system dimension must be >= 2, got {}", coefficients_.size()));
  if (coefficients_.size() != branches_.size())
    throw InvalidArgument(fmt::format("{} coefficients for {} branches", coefficients_.size(),
                                      branches_.size()));
  double total = 0.0;
  for (const cplx& c : coefficients_) total += std::norm(c);
  if (std::abs(total - 1.0) > kCoefficientTolerance)
    throw InvalidArgument(fmt::format("sum |c_a|^2 = {:.15g} is not 1", total));
  for (const PureState& b : branches_)
    if (b.num_qubits() != branches_.front().num_qubits())
      throw InvalidArgument("branches live on environments of different size");
}

BranchedState from_branches(std::vector<cplx> coefficients, std::vector<PureState> branches) {
  return BranchedState(std::move(coefficients), std::move(branches));
}

LocalState broadcast_local_state(const BroadcastSpec& spec, int a) {
  const BlochVector& m = spec.axis;
  if (std::abs(m.norm() - 1.0) > 1e-10)
    throw InvalidArgument(fmt::format("broadcast axis norm {:.15g} is not 1", m.norm()));
  const double s = (a % 2 == 0) ? 1.0 : -1.0;
  const double c = std::cos(spec.lambda_t0);
  const cplx is{0.0, s * std::sin(spec.lambda_t0)};
  // exp(i theta s m.sigma) = cos(theta) I + i s sin(theta) m.sigma, applied to |+>.
  const cplx u00 = c + is * m.z;
  const cplx u01 = is * cplx{m.x, -m.y};
  const cplx u10 = is * cplx{m.x, m.y};
  const cplx u11 = c - is * m.z;
  return {(u00 + u01) * M_SQRT1_2, (u10 + u11) * M_SQRT1_2};
}

BranchedState prepare_broadcast(const BroadcastSpec& spec, int num_env) {
  if (spec.system_dim() != 2)
    throw InvalidArgument(fmt::format(
        "broadcast preparation needs d = 2, got {}; build general states with from_branches",
        spec.system_dim()));
  std::vector<PureState> branches;
  for (int a = 0; a < 2; ++a) branches.push_back(product_state(broadcast_local_state(spec, a), num_env));
  return BranchedState(spec.coefficients, std::move(branches));
}

BranchedState evolve_branches(const BranchedState& bs, const PauliOperator& H, double t,
                              const PropagatorConfig& cfg) {
  if (H.num_qubits() != bs.num_env())
    throw InvalidArgument("evolve_branches: Hamiltonian must act on the environment only");
  std::vector<PureState> out;
  out.reserve(bs.branches().size());
  // Branches run one after another; each evolve call parallelizes its kernels.
  for (const PureState& b : bs.branches()) out.push_back(evolve(H, b, t, cfg));
  return BranchedState(std::vector<cplx>(bs.coefficients().begin(), bs.coefficients().end()),
                       std::move(out));
}

ComplexMatrix system_density_matrix(const BranchedState& bs) {
  const int d = bs.system_dim();
  const auto c = bs.coefficients();
  ComplexMatrix rho(d, d);
  for (int a = 0; a < d; ++a) {
    rho(a, a) = bs.weight(a);
    for (int b = a + 1; b < d; ++b) {
      rho(a, b) = c[a] * std::conj(c[b]) * inner(bs.branch(b), bs.branch(a));
      rho(b, a) = std::conj(rho(a, b));
    }
  }
  return rho;
}

double system_entropy(const BranchedState& bs) { return von_neumann_entropy(system_density_matrix(bs)); }

double dephased_system_entropy(const BranchedState& bs) {
  std::vector<double> p;
  for (int a = 0; a < bs.system_dim(); ++a) p.push_back(bs.weight(a));
  return shannon_entropy(p);
}

EntropyTriple fraction_entropies(const BranchedState& bs, int n) {
  const int N = bs.num_env();
  if (n < 1 || n > N) throw InvalidArgument(fmt::format("fraction size {} outside [1, {}]", n, N));
  EntropyTriple out;
  out.system = system_entropy(bs);
  std::vector<ComplexMatrix> diag(bs.system_dim());
  if (2 * n <= N) {
    const auto block = static_cast<Eigen::Index>(pow2(n));
    const ComplexMatrix rho_sf = block_matrix(
        bs, block, [n](const PureState& a, const PureState& b) { return reduced_cross_matrix(a, b, n); },
        &diag);
    out.system_fraction = von_neumann_entropy(rho_sf);
    out.fraction = von_neumann_entropy(weighted_sum(bs, diag));
  } else {
    // The global state is pure: H(F) = H(S, E\F) and H(FS) = H(E\F).
    const auto block = static_cast<Eigen::Index>(pow2(N - n));
    const ComplexMatrix rho_s_rest = block_matrix(
        bs, block,
        [n](const PureState& a, const PureState& b) { return complement_cross_matrix(a, b, n); },
        &diag);
    out.fraction = von_neumann_entropy(rho_s_rest);
    out.system_fraction = von_neumann_entropy(weighted_sum(bs, diag));
  }
  return out;
}

double mutual_information(const BranchedState& bs, int n) {
  const EntropyTriple h = fraction_entropies(bs, n);
  const double mi = h.fraction + h.system - h.system_fraction;
  const double cap = 2.0 * std::log(static_cast<double>(bs.system_dim()));
  if (mi < -kNegativeMiSlack || mi > cap + kNegativeMiSlack)
    throw InvariantViolation(
        fmt::format("mutual information {:.3e} at n = {} outside [0, 2 ln d]", mi, n));
  return std::clamp(mi, 0.0, cap);
}

MICurve mutual_information_curve(const BranchedState& bs, std::span<const int> sizes) {
  MICurve curve;
  curve.sizes.assign(sizes.begin(), sizes.end());
  curve.values.assign(sizes.size(), 0.0);
  curve.num_env = bs.num_env();
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(sizes.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      curve.values[i] = mutual_information(bs, sizes[i]);
    } catch (...) {
#pragma omp critical(darwinlab_mi_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return curve;
}

MICurve mutual_information_curve(const BranchedState& bs) {
  std::vector<int> sizes(bs.num_env());
  for (int n = 1; n <= bs.num_env(); ++n) sizes[n - 1] = n;
  return mutual_information_curve(bs, sizes);
}

double classical_dephased_mi(const BranchedState& bs, const FractionSpectrum& spectrum) {
  if (spectrum.size() > bs.num_env())
    throw InvalidArgument("fraction spectrum larger than the environment");
  const int d = bs.system_dim();
  std::vector<std::vector<double>> q(d);
  for (int a = 0; a < d; ++a) q[a] = spectrum.weights(bs.branch(a));
  const std::size_t levels = q.front().size();
  std::vector<double> marginal(levels, 0.0);
  for (int a = 0; a < d; ++a)
    for (std::size_t mu = 0; mu < levels; ++mu) marginal[mu] += bs.weight(a) * q[a][mu];
  double mi = 0.0;
  for (int a = 0; a < d; ++a)
    for (std::size_t mu = 0; mu < levels; ++mu) {
      const double joint = bs.weight(a) * q[a][mu];
      if (joint > 0.0 && marginal[mu] > 0.0) mi += joint * std::log(q[a][mu] / marginal[mu]);
    }
  return std::max(mi, 0.0);
}

double classical_dephased_mi(const BranchedState& bs, int n, const IsingParams& p) {
  if (n < 1 || n > bs.num_env()) throw InvalidArgument(fmt::format("fraction size {} out of range", n));
  if (n > FractionSpectrum::kMaxSize)
    throw InfeasibleSize(fmt::format("dephased MI needs dense H_F; n = {} exceeds {}", n,
                                     FractionSpectrum::kMaxSize));
  return classical_dephased_mi(bs, *fraction_spectrum(p, n));
}

double redundancy_number(const MICurve& curve, double h_s, double delta) {
  if (curve.sizes.empty()) throw InvalidArgument("redundancy_number: empty curve");
  if (curve.sizes.size() != curve.values.size()) throw InvalidArgument("redundancy_number: ragged curve");
  if (!(delta > 0.0) || !(delta < h_s))
    throw InvalidArgument(fmt::format("delta must lie in (0, H_S = {:.6g})", h_s));
  const int total = curve.num_env > 0 ? curve.num_env : *std::max_element(curve.sizes.begin(), curve.sizes.end());
  int n_min = 0;
  for (std::size_t i = 0; i < curve.sizes.size(); ++i)
    if (curve.values[i] >= h_s - delta && (n_min == 0 || curve.sizes[i] < n_min)) n_min = curve.sizes[i];
  return n_min == 0 ? 0.0 : static_cast<double>(total) / n_min;
}

}  // namespace darwinlab
