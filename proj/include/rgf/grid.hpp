/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

#include "rgf/types.hpp"

namespace rgf {

// Rectangular computational domain with per-point grid spacing in meters and
// a sea/land mask (true = sea). ghost_width is the number of imaginary sea
// points appended beyond coastlines when a filter sweep meets land.
struct Grid2D {
  Index nx = 0;
  Index ny = 0;
  Field dx;        // nx x ny, meters
  Field dy;        // nx x ny, meters
  MaskField mask;  // nx x ny, true = sea
  Index ghost_width = 0;

  static Grid2D uniform(Index nx, Index ny, Scalar dx, Scalar dy,
                        Index ghost_width = 0);

  void validate() const;
  bool all_sea() const { return mask.all(); }
  Index size() const { return nx * ny; }
  bool same_shape(const Grid2D& other) const {
    return nx == other.nx && ny == other.ny;
  }
};

// Per-point correlation radii in meters, one field per sweep direction.
struct ScaleField {
  Field rx;  // nx x ny
  Field ry;  // nx x ny

  void validate(const Grid2D& grid) const;

  // Non-dimensional length scales sigma = R/dx per direction. Land points get
  // a benign value of 1 so downstream coefficient tables stay finite; sweeps
  // never read them.
  Field sigma_x(const Grid2D& grid) const;
  Field sigma_y(const Grid2D& grid) const;
  Scalar max_sigma(const Grid2D& grid) const;
};

// Creates the constant-radius scale field used by the single-length-scale
// experiments.
ScaleField uniform_scale(const Grid2D& grid, Scalar r);

// Scalar field on a Grid2D. Filter applications keep land points at zero.
struct StateField {
  const Grid2D* grid = nullptr;
  Field values;

  static StateField zeros(const Grid2D& g) {
    return {&g, Field::Zero(g.nx, g.ny)};
  }
  static StateField from(const Grid2D& g, Field v) {
    if (v.rows() != g.nx || v.cols() != g.ny)
      throw std::invalid_argument("StateField: values shape does not match grid");
    return {&g, std::move(v)};
  }
};

inline void require_on_grid(const StateField& f, const Grid2D& g,
                            const std::string& what) {
  if (f.grid == nullptr || !f.grid->same_shape(g) ||
      f.values.rows() != g.nx || f.values.cols() != g.ny)
    throw std::invalid_argument(what + ": field is not on the expected grid");
}

}  // namespace rgf
