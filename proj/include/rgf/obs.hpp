/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include "rgf/grid.hpp"
#include "rgf/types.hpp"

namespace rgf {

// Observations at fractional grid coordinates with a diagonal observation
// error covariance (r_var holds the per-observation variances).
struct ObsSet {
  Eigen::ArrayX2d positions;  // column 0: fractional x index, column 1: y
  Vector values;
  Vector r_var;

  Index size() const { return values.size(); }
  void validate(const Grid2D& grid) const;
};

namespace detail {

struct BilinearStencil {
  Index i0, j0;
  Scalar w00, w10, w01, w11;
};

BilinearStencil bilinear_stencil(const Grid2D& grid, Scalar x, Scalar y,
                                 Index obs_row);

}  // namespace detail

// H: bilinear interpolation of the field at each observation position.
// Exact for fields affine in the grid indices.
Vector obs_operator(const StateField& field, const ObsSet& obs);

// H^T: scatter with the same bilinear weights.
StateField obs_operator_transpose(const Vector& vec, const ObsSet& obs,
                                  const Grid2D& grid);

// d = y - H(x_b)
Vector misfit(const Vector& background_at_obs, const ObsSet& obs);

}  // namespace rgf
