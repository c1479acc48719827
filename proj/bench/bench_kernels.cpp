// Serial reference vs OpenMP kernels on N-qubit random states.
// Run with OMP_NUM_THREADS set to compare thread counts.
#include <random>

#include <benchmark/benchmark.h>

#include "darwinlab/hamiltonians.hpp"
#include "darwinlab/kernels.hpp"
#include "darwinlab/pauli_operator.hpp"

namespace {

using namespace darwinlab;

CVector random_vector(int num_qubits, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(pow2(num_qubits));
  for (cplx& z : v) z = {g(rng), g(rng)};
  return v;
}

IsingParams chain(int n) {
  IsingParams p;
  p.num_sites = n;
  return p;
}

void BM_MatvecSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PauliOperator H = build_ising_chain(chain(n));
  const CVector in = random_vector(n, 1);
  CVector out(in.size());
  for (auto _ : state) {
    H.apply_serial(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(in.size()));
}

void BM_MatvecParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PauliOperator H = build_ising_chain(chain(n));
  const CVector in = random_vector(n, 1);
  CVector out(in.size());
  for (auto _ : state) {
    H.apply(in, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(in.size()));
}

template <bool Parallel>
void BM_Dot(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CVector a = random_vector(n, 2), b = random_vector(n, 3);
  for (auto _ : state) {
    cplx r = Parallel ? kernels::dot(a, b) : kernels::serial::dot(a, b);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void BM_FractionCross(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int f = n / 2;
  const CVector a = random_vector(n, 4), b = random_vector(n, 5);
  CVector out(pow2(f) * pow2(f));
  for (auto _ : state) {
    if (Parallel) kernels::fraction_cross(a, b, f, out);
    else kernels::serial::fraction_cross(a, b, f, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_ComplementCross(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int f = n - n / 2;
  const CVector a = random_vector(n, 6), b = random_vector(n, 7);
  CVector out(pow2(n - f) * pow2(n - f));
  for (auto _ : state) {
    if (Parallel) kernels::complement_cross(a, b, f, out);
    else kernels::serial::complement_cross(a, b, f, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_MatvecSerial)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatvecParallel)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dot<false>)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Dot<true>)->DenseRange(12, 20, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FractionCross<false>)->DenseRange(12, 16, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FractionCross<true>)->DenseRange(12, 16, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ComplementCross<false>)->DenseRange(12, 16, 4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ComplementCross<true>)->DenseRange(12, 16, 4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
