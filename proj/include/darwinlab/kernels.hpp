#pragma once

// Bitwise statevector kernels. Every kernel has an OpenMP version (the one the
// library calls) and a plain serial reference in `kernels::serial` that the
// tests and the benchmark compare against.
//
// Amplitude layout: qubit j (0-based) is bit j of the basis index. A fraction
// of size n is the block of the n lowest bits, so a state on N qubits is a
// column-major 2^n x 2^(N-n) matrix M with M(f, r) = psi[f + 2^n r].

#include <span>

#include "darwinlab/types.hpp"

namespace darwinlab::kernels {

// Reductions are split into a fixed number of chunks that are summed in
// order, so results do not depend on the thread count.
inline constexpr int kReductionChunks = 64;

cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // sum conj(a_i) b_i
double norm_sq(std::span<const cplx> a);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx alpha, std::span<cplx> x);

// out(f, f') = sum_r a[f + D r] conj(b[f' + D r]),  D = 2^n.
// `out` is column-major D x D.
void fraction_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                    std::span<cplx> out);

// out(r, r') = sum_f a[f + D r] conj(b[f + D r']),  R = size / D.
// `out` is column-major R x R. This is the reduction onto the complement of
// the fraction (sites n+1..N).
void complement_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                      std::span<cplx> out);

namespace serial {

cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> a);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(cplx alpha, std::span<cplx> x);
void fraction_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                    std::span<cplx> out);
void complement_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                      std::span<cplx> out);

}  // namespace serial

}  // namespace darwinlab::kernels
