#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace darwinlab {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr std::uint64_t pow2(int k) { return std::uint64_t{1} << k; }

}  // namespace darwinlab
