#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "darwinlab/branches.hpp"

namespace darwinlab {

struct EnsembleMode {
  enum class Kind { exhaustive, sampled };
  Kind kind = Kind::exhaustive;
  std::uint64_t seed = 0;
  std::size_t count = 0;  // samples, sampled mode only

  static EnsembleMode exhaustive() { return {}; }
  static EnsembleMode sampled(std::uint64_t seed, std::size_t count) {
    return {Kind::sampled, seed, count};
  }
};

/// Conditional system states after measuring every environment qubit in the
/// computational basis, weighted by Born probability. States are stored
/// flat: entry i occupies states[i * d .. i * d + d).
class ProjectiveEnsemble {
 public:
  ProjectiveEnsemble(int system_dim, EnsembleMode mode, std::vector<double> probabilities,
                     CVector states);

  int system_dim() const { return system_dim_; }
  const EnsembleMode& mode() const { return mode_; }
  std::size_t size() const { return probabilities_.size(); }
  double probability(std::size_t i) const { return probabilities_[i]; }
  std::span<const cplx> state(std::size_t i) const {
    return {states_.data() + i * system_dim_, static_cast<std::size_t>(system_dim_)};
  }
  std::span<const double> probabilities() const { return probabilities_; }

  /// sum_i p_i |psi_i><psi_i|
  ComplexMatrix mixture() const;

 private:
  int system_dim_;
  EnsembleMode mode_;
  std::vector<double> probabilities_;
  CVector states_;
};

inline constexpr int kMaxExhaustiveEnv = 22;
inline constexpr double kZeroOutcomeProbability = 1e-28;

/// Exhaustive mode enumerates all 2^N outcomes (N <= 22) and drops those with
/// probability below 1e-28. Sampled mode draws `count` outcomes from the Born
/// distribution, each carrying weight 1/count.
ProjectiveEnsemble projective_ensemble(const BranchedState& bs, EnsembleMode mode);

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges on [-1, 1]
  std::vector<double> mass;
};

/// Probability-weighted histogram of z = |psi_0|^2 - |psi_1|^2 (d = 2 only).
Histogram pointer_histogram(const ProjectiveEnsemble& ens, int bins = 64);

/// 1/2 sum |mass_i - 1/bins|: distance to the uniform density on [-1, 1].
double total_variation_to_uniform(const Histogram& h);
double total_variation(const Histogram& a, const Histogram& b);

/// Probability of |z| > threshold, computed from the ensemble itself.
double pointer_mass_beyond(const ProjectiveEnsemble& ens, double threshold);

}  // namespace darwinlab
