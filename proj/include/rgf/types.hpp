/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <Eigen/Dense>

namespace rgf {

using Scalar = double;
using Index = Eigen::Index;

template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using ArrayX = Eigen::Array<S, Eigen::Dynamic, 1>;

using Vector = VectorX<Scalar>;
using Array = ArrayX<Scalar>;

// 2D fields are stored with the x index along Eigen rows and the y index
// along Eigen columns, so an x-direction sweep touches contiguous memory.
using Field = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using MaskField = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class FilterOrder { first, third };

// How the third-order filter derives its coefficient argument from the
// non-dimensional length scale sigma = R/dx:
//   yvv95          - Young & van Vliet (1995) fitted warping (default)
//   variance_match - solve for the argument whose discrete cascade variance
//                    equals sigma^2 (the third-order analogue of the
//                    first-order coefficient relation)
//   none           - pass sigma through unchanged
enum class Rf3Calibration { yvv95, variance_match, none };

}  // namespace rgf
