/*
 * This file is part of qdl.
 *
 * Licensed under the Apache License, Version 2.0. You may obtain a copy of
 * the license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#ifndef QDL_TYPES_HPP
#define QDL_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace qdl {

using Real = double;
using Complex = std::complex<Real>;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Dense complex matrix, the substrate for unitaries and observables.
using Matrix = DenseMatrix<Complex>;

/// Pure state: unit-norm complex amplitude vector of dimension 2^n.
using State = DenseVector<Complex>;

using RealVector = DenseVector<Real>;

/// Largest Hilbert-space dimension the dense code paths are meant for (n <= 6).
inline constexpr int kMaxDim = 64;

}  // namespace qdl

#endif
