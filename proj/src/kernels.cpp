#include "darwinlab/kernels.hpp"

#include <array>
#include <cassert>
#include <cstddef>

namespace darwinlab::kernels {

namespace {

// Below this many elements the OpenMP overhead dominates.
constexpr std::size_t kParallelThreshold = 1u << 12;

std::size_t chunk_len(std::size_t size) {
  return (size + kReductionChunks - 1) / kReductionChunks;
}

}  // namespace

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  assert(a.size() == b.size());
  const std::size_t size = a.size();
  const std::size_t len = chunk_len(size);
  std::array<double, kReductionChunks> re{};
  std::array<double, kReductionChunks> im{};
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (int c = 0; c < kReductionChunks; ++c) {
    const std::size_t lo = std::min(size, c * len);
    const std::size_t hi = std::min(size, lo + len);
    double sr = 0.0, si = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double ar = a[i].real(), ai = a[i].imag();
      const double br = b[i].real(), bi = b[i].imag();
      sr += ar * br + ai * bi;
      si += ar * bi - ai * br;
    }
    re[c] = sr;
    im[c] = si;
  }
  double sr = 0.0, si = 0.0;
  for (int c = 0; c < kReductionChunks; ++c) {
    sr += re[c];
    si += im[c];
  }
  return {sr, si};
}

double norm_sq(std::span<const cplx> a) {
  const std::size_t size = a.size();
  const std::size_t len = chunk_len(size);
  std::array<double, kReductionChunks> part{};
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (int c = 0; c < kReductionChunks; ++c) {
    const std::size_t lo = std::min(size, c * len);
    const std::size_t hi = std::min(size, lo + len);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(a[i]);
    part[c] = s;
  }
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  assert(x.size() == y.size());
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < size; ++i) y[i] += alpha * x[i];
}

void scale(cplx alpha, std::span<cplx> x) {
  const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) if (x.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < size; ++i) x[i] *= alpha;
}

void fraction_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                    std::span<cplx> out) {
  assert(a.size() == b.size());
  const std::size_t dim = pow2(n);
  const std::size_t rest = a.size() / dim;
  assert(out.size() == dim * dim);
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(dim);
  // Column f' accumulates contiguous blocks of a scaled by conj(b[f' + D r]).
#pragma omp parallel for schedule(static) if (a.size() * dim >= kParallelThreshold)
  for (std::ptrdiff_t fp = 0; fp < cols; ++fp) {
    cplx* col = out.data() + fp * dim;
    for (std::size_t f = 0; f < dim; ++f) col[f] = 0.0;
    for (std::size_t r = 0; r < rest; ++r) {
      const cplx w = std::conj(b[fp + dim * r]);
      if (w == cplx{}) continue;
      const cplx* block = a.data() + dim * r;
      for (std::size_t f = 0; f < dim; ++f) col[f] += block[f] * w;
    }
  }
}

void complement_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                      std::span<cplx> out) {
  assert(a.size() == b.size());
  const std::size_t dim = pow2(n);
  const std::size_t rest = a.size() / dim;
  assert(out.size() == rest * rest);
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(rest);
#pragma omp parallel for schedule(static) if (a.size() * rest >= kParallelThreshold)
  for (std::ptrdiff_t rp = 0; rp < cols; ++rp) {
    const cplx* bblock = b.data() + dim * rp;
    for (std::size_t r = 0; r < rest; ++r) {
      const cplx* ablock = a.data() + dim * r;
      double sr = 0.0, si = 0.0;
      for (std::size_t f = 0; f < dim; ++f) {
        const double ar = ablock[f].real(), ai = ablock[f].imag();
        const double br = bblock[f].real(), bi = bblock[f].imag();
        sr += ar * br + ai * bi;
        si += ai * br - ar * bi;
      }
      out[r + rest * rp] = {sr, si};
    }
  }
}

namespace serial {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm_sq(std::span<const cplx> a) {
  double s = 0.0;
  for (const cplx& v : a) s += std::norm(v);
  return s;
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(cplx alpha, std::span<cplx> x) {
  for (cplx& v : x) v *= alpha;
}

void fraction_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                    std::span<cplx> out) {
  const std::size_t dim = pow2(n);
  const std::size_t rest = a.size() / dim;
  for (std::size_t f = 0; f < dim; ++f)
    for (std::size_t fp = 0; fp < dim; ++fp) {
      cplx s{};
      for (std::size_t r = 0; r < rest; ++r)
        s += a[f + dim * r] * std::conj(b[fp + dim * r]);
      out[f + dim * fp] = s;
    }
}

void complement_cross(std::span<const cplx> a, std::span<const cplx> b, int n,
                      std::span<cplx> out) {
  const std::size_t dim = pow2(n);
  const std::size_t rest = a.size() / dim;
  for (std::size_t r = 0; r < rest; ++r)
    for (std::size_t rp = 0; rp < rest; ++rp) {
      cplx s{};
      for (std::size_t f = 0; f < dim; ++f)
        s += a[f + dim * r] * std::conj(b[f + dim * rp]);
      out[r + rest * rp] = s;
    }
}

}  // namespace serial

}  // namespace darwinlab::kernels
