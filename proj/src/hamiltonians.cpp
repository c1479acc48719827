#include "darwinlab/hamiltonians.hpp"

#include <cmath>

#include <fmt/format.h>

#include "darwinlab/error.hpp"

namespace darwinlab {

namespace {

void check_ising(const IsingParams& p) {
  if (p.num_sites < 2) throw InvalidArgument(fmt::format("Ising chain needs N >= 2, got {}", p.num_sites));
  if (!std::isfinite(p.J) || !std::isfinite(p.h_x) || !std::isfinite(p.h_z))
    throw InvalidArgument("non-finite Ising parameter");
}

void check_axis(const BlochVector& m) {
  if (std::abs(m.norm() - 1.0) > 1e-10)
    throw InvalidArgument(fmt::format("axis norm {:.15g} is not 1", m.norm()));
}

// Open chain on bits [0, n) plus, optionally, the wrap-around bond.
std::vector<PauliTerm> chain_terms(const IsingParams& p, int n, bool wrap) {
  std::vector<PauliTerm> terms;
  for (int j = 0; j < n; ++j) {
    terms.push_back(pauli_term(-p.h_x, {{j, 'X'}}));
    terms.push_back(pauli_term(-p.h_z, {{j, 'Z'}}));
  }
  for (int j = 0; j + 1 < n; ++j) terms.push_back(pauli_term(-p.J, {{j, 'Z'}, {j + 1, 'Z'}}));
  // For n = 2 the wrap bond duplicates bond (1,2); the merge doubles it.
  if (wrap) terms.push_back(pauli_term(-p.J, {{n - 1, 'Z'}, {0, 'Z'}}));
  return terms;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1) from the top 53 bits, never exactly 0.
double to_unit(std::uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

BlochVector interpolated_axis(double lambda) {
  return {0.0, std::sin(lambda * M_PI / 2.0), std::cos(lambda * M_PI / 2.0)};
}

PauliOperator build_ising_chain(const IsingParams& p) {
  check_ising(p);
  return PauliOperator(p.num_sites, chain_terms(p, p.num_sites, p.boundary == Boundary::periodic));
}

PauliOperator build_fraction_hamiltonian(const IsingParams& p, int n) {
  check_ising(p);
  if (n < 1 || n > p.num_sites)
    throw InvalidArgument(fmt::format("fraction size {} outside [1, {}]", n, p.num_sites));
  return PauliOperator(n, chain_terms(p, n, false));
}

PauliOperator build_broadcast_interaction(const BroadcastSpec& spec, int num_env, double coupling) {
  if (spec.system_dim() != 2)
    throw InvalidArgument(
        fmt::format("broadcast interaction needs a qubit system, got d = {}", spec.system_dim()));
  check_axis(spec.axis);
  if (num_env < 1) throw InvalidArgument("broadcast interaction needs N >= 1");
  const int sys = num_env;
  std::vector<PauliTerm> terms;
  for (int j = 0; j < num_env; ++j) {
    terms.push_back(pauli_term(-coupling * spec.axis.x, {{sys, 'Z'}, {j, 'X'}}));
    terms.push_back(pauli_term(-coupling * spec.axis.y, {{sys, 'Z'}, {j, 'Y'}}));
    terms.push_back(pauli_term(-coupling * spec.axis.z, {{sys, 'Z'}, {j, 'Z'}}));
  }
  return PauliOperator(num_env + 1, std::move(terms));
}

double all_to_all_coupling(std::uint64_t seed, int j, int k, int alpha) {
  std::uint64_t key = splitmix64(seed);
  key = splitmix64(key ^ static_cast<std::uint64_t>(j));
  key = splitmix64(key ^ static_cast<std::uint64_t>(k));
  key = splitmix64(key ^ static_cast<std::uint64_t>(alpha));
  const double u1 = to_unit(key);
  const double u2 = to_unit(splitmix64(key));
  // Box-Muller
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

PauliOperator build_all_to_all(const AllToAllParams& p) {
  if (p.num_sites < 2) throw InvalidArgument("all-to-all Hamiltonian needs N >= 2");
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.num_sites));
  std::vector<PauliTerm> terms;
  for (int j = 0; j < p.num_sites; ++j)
    for (int k = j + 1; k < p.num_sites; ++k) {
      terms.push_back(pauli_term(scale * all_to_all_coupling(p.seed, j, k, 0), {{j, 'X'}, {k, 'X'}}));
      terms.push_back(pauli_term(scale * all_to_all_coupling(p.seed, j, k, 1), {{j, 'Z'}, {k, 'Z'}}));
    }
  return PauliOperator(p.num_sites, std::move(terms));
}

double product_energy_density(const BlochVector& m, const IsingParams& p) {
  if (p.boundary != Boundary::periodic)
    throw InvalidArgument("closed-form energy density needs a periodic chain; use an expectation value");
  check_axis(m);
  return -(p.J * m.z * m.z + p.h_x * m.x + p.h_z * m.z);
}

}  // namespace darwinlab
