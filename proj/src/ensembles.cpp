#include "darwinlab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "darwinlab/error.hpp"

namespace darwinlab {

ProjectiveEnsemble::ProjectiveEnsemble(int system_dim, EnsembleMode mode,
                                       std::vector<double> probabilities, CVector states)
    : system_dim_(system_dim),
      mode_(mode),
      probabilities_(std::move(probabilities)),
      states_(std::move(states)) {
  if (states_.size() != probabilities_.size() * static_cast<std::size_t>(system_dim_))
    throw InvalidArgument("ensemble states and probabilities disagree in size");
}

ComplexMatrix ProjectiveEnsemble::mixture() const {
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> acc =
      ComplexMatrix::Zero(system_dim_, system_dim_);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto s = state(i);
    for (int a = 0; a < system_dim_; ++a)
      for (int b = 0; b < system_dim_; ++b) acc(a, b) += probabilities_[i] * s[a] * std::conj(s[b]);
  }
  return acc;
}

ProjectiveEnsemble projective_ensemble(const BranchedState& bs, EnsembleMode mode) {
  const int d = bs.system_dim();
  const int N = bs.num_env();
  const std::size_t outcomes = pow2(N);
  const auto c = bs.coefficients();

  if (mode.kind == EnsembleMode::Kind::exhaustive) {
    if (N > kMaxExhaustiveEnv)
      throw InfeasibleSize(fmt::format("exhaustive ensemble needs N <= {}, got {}", kMaxExhaustiveEnv, N));
    std::vector<double> prob(outcomes);
    CVector states(outcomes * d);
    const auto count = static_cast<std::ptrdiff_t>(outcomes);
    // Outcomes are independent; each writes its own slot.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t z = 0; z < count; ++z) {
      double p = 0.0;
      for (int a = 0; a < d; ++a) {
        const cplx v = c[a] * bs.branch(a)[static_cast<std::size_t>(z)];
        states[z * d + a] = v;
        p += std::norm(v);
      }
      prob[z] = p;
      if (p >= kZeroOutcomeProbability) {
        const double inv = 1.0 / std::sqrt(p);
        for (int a = 0; a < d; ++a) states[z * d + a] *= inv;
      }
    }
    // Compact in outcome order.
    std::size_t kept = 0;
    for (std::size_t z = 0; z < outcomes; ++z) {
      if (prob[z] < kZeroOutcomeProbability) continue;
      prob[kept] = prob[z];
      std::copy_n(states.begin() + z * d, d, states.begin() + kept * d);
      ++kept;
    }
    prob.resize(kept);
    states.resize(kept * d);
    return ProjectiveEnsemble(d, mode, std::move(prob), std::move(states));
  }

  if (mode.count == 0) throw InvalidArgument("sampled ensemble needs count > 0");
  std::vector<double> cumulative(outcomes);
  double total = 0.0;
  for (std::size_t z = 0; z < outcomes; ++z) {
    double p = 0.0;
    for (int a = 0; a < d; ++a) p += std::norm(c[a] * bs.branch(a)[z]);
    total += p;
    cumulative[z] = total;
  }
  if (!(total > kZeroOutcomeProbability))
    throw InvalidArgument("sampled ensemble: every outcome has zero probability");
  std::mt19937_64 rng(mode.seed);
  std::vector<double> prob(mode.count, 1.0 / static_cast<double>(mode.count));
  CVector states(mode.count * d);
  for (std::size_t s = 0; s < mode.count; ++s) {
    // 53-bit uniform built by hand so the stream is identical across standard libraries.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t z = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), outcomes - 1);
    double p = 0.0;
    for (int a = 0; a < d; ++a) {
      const cplx v = c[a] * bs.branch(a)[z];
      states[s * d + a] = v;
      p += std::norm(v);
    }
    const double inv = 1.0 / std::sqrt(p);
    for (int a = 0; a < d; ++a) states[s * d + a] *= inv;
  }
  return ProjectiveEnsemble(d, mode, std::move(prob), std::move(states));
}

Histogram pointer_histogram(const ProjectiveEnsemble& ens, int bins) {
  if (ens.system_dim() != 2)
    throw InvalidArgument(fmt::format("pointer histogram needs d = 2, got {}", ens.system_dim()));
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  Histogram h;
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = -1.0 + 2.0 * i / bins;
  h.mass.assign(bins, 0.0);
  // Serial accumulation in entry order keeps the sums reproducible.
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto s = ens.state(i);
    const double z = std::norm(s[0]) - std::norm(s[1]);
    int bin = static_cast<int>(std::floor((z + 1.0) * 0.5 * bins));
    bin = std::clamp(bin, 0, bins - 1);
    h.mass[bin] += ens.probability(i);
  }
  double total = 0.0;
  for (double m : h.mass) total += m;
  for (double& m : h.mass) m /= total;
  return h;
}

double total_variation_to_uniform(const Histogram& h) {
  const double u = 1.0 / static_cast<double>(h.mass.size());
  double tv = 0.0;
  for (double m : h.mass) tv += std::abs(m - u);
  return 0.5 * tv;
}

double total_variation(const Histogram& a, const Histogram& b) {
  if (a.mass.size() != b.mass.size()) throw InvalidArgument("histograms with different binning");
  double tv = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i) tv += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * tv;
}

double pointer_mass_beyond(const ProjectiveEnsemble& ens, double threshold) {
  if (ens.system_dim() != 2) throw InvalidArgument("pointer mass needs d = 2");
  double m = 0.0, total = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto s = ens.state(i);
    total += ens.probability(i);
    if (std::abs(std::norm(s[0]) - std::norm(s[1])) > threshold) m += ens.probability(i);
  }
  return m / total;
}

}  // namespace darwinlab
