// types.hpp: dense Eigen aliases shared by every module

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dressedspec {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using RealMatrixT = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using RealMatrix = RealMatrixT<double>;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;

// Operators on the 2^N Hilbert space. Basis index b = sum_i s_i 2^i with
// s_i = 1 for an excited site, so site 0 is the least significant bit and the
// ket |s_{N-1} ... s_0> is read left to right from the highest site.
using QuantumOperator = ComplexMatrix;
using DensityMatrix = ComplexMatrix;

} // namespace dressedspec
