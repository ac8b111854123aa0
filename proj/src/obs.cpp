/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/obs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rgf {

namespace detail {

BilinearStencil bilinear_stencil(const Grid2D& grid, Scalar x, Scalar y,
                                 Index obs_row) {
  const auto fail = [obs_row](const std::string& why) {
    throw std::invalid_argument("observation " + std::to_string(obs_row) +
                                ": " + why);
  };
  if (!std::isfinite(x) || !std::isfinite(y) || x < 0 || y < 0 ||
      x > Scalar(grid.nx - 1) || y > Scalar(grid.ny - 1))
    fail("position (" + std::to_string(x) + "," + std::to_string(y) +
         ") is outside the grid");

  BilinearStencil st;
  st.i0 = std::min<Index>(static_cast<Index>(std::floor(x)), grid.nx - 2);
  st.j0 = std::min<Index>(static_cast<Index>(std::floor(y)), grid.ny - 2);
  const Scalar fx = x - Scalar(st.i0);
  const Scalar fy = y - Scalar(st.j0);
  st.w00 = (1 - fx) * (1 - fy);
  st.w10 = fx * (1 - fy);
  st.w01 = (1 - fx) * fy;
  st.w11 = fx * fy;

  const bool any_sea = grid.mask(st.i0, st.j0) || grid.mask(st.i0 + 1, st.j0) ||
                       grid.mask(st.i0, st.j0 + 1) ||
                       grid.mask(st.i0 + 1, st.j0 + 1);
  if (!any_sea) fail("all four stencil corners are land");
  return st;
}

}  // namespace detail

void ObsSet::validate(const Grid2D& grid) const {
  if (positions.rows() != values.size() || positions.rows() != r_var.size())
    throw std::invalid_argument("ObsSet: inconsistent column lengths");
  for (Index n = 0; n < size(); ++n) {
    detail::bilinear_stencil(grid, positions(n, 0), positions(n, 1), n);
    if (!(r_var[n] > 0))
      throw std::invalid_argument("observation " + std::to_string(n) +
                                  ": error variance must be positive");
  }
}

Vector obs_operator(const StateField& field, const ObsSet& obs) {
  const Grid2D& grid = *field.grid;
  Vector out(obs.size());
  for (Index n = 0; n < obs.size(); ++n) {
    const auto st =
        detail::bilinear_stencil(grid, obs.positions(n, 0), obs.positions(n, 1), n);
    out[n] = st.w00 * field.values(st.i0, st.j0) +
             st.w10 * field.values(st.i0 + 1, st.j0) +
             st.w01 * field.values(st.i0, st.j0 + 1) +
             st.w11 * field.values(st.i0 + 1, st.j0 + 1);
  }
  return out;
}

StateField obs_operator_transpose(const Vector& vec, const ObsSet& obs,
                                  const Grid2D& grid) {
  if (vec.size() != obs.size())
    throw std::invalid_argument("obs_operator_transpose: vector length mismatch");
  StateField out = StateField::zeros(grid);
  for (Index n = 0; n < obs.size(); ++n) {
    const auto st =
        detail::bilinear_stencil(grid, obs.positions(n, 0), obs.positions(n, 1), n);
    out.values(st.i0, st.j0) += st.w00 * vec[n];
    out.values(st.i0 + 1, st.j0) += st.w10 * vec[n];
    out.values(st.i0, st.j0 + 1) += st.w01 * vec[n];
    out.values(st.i0 + 1, st.j0 + 1) += st.w11 * vec[n];
  }
  return out;
}

Vector misfit(const Vector& background_at_obs, const ObsSet& obs) {
  if (background_at_obs.size() != obs.size())
    throw std::invalid_argument("misfit: vector length mismatch");
  return obs.values - background_at_obs;
}

}  // namespace rgf
