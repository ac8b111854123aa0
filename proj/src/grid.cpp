/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/grid.hpp"

#include <cmath>

namespace rgf {

Grid2D Grid2D::uniform(Index nx, Index ny, Scalar dx, Scalar dy,
                       Index ghost_width) {
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.dx = Field::Constant(nx, ny, dx);
  g.dy = Field::Constant(nx, ny, dy);
  g.mask = MaskField::Constant(nx, ny, true);
  g.ghost_width = ghost_width;
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (nx < 4 || ny < 4)
    throw std::invalid_argument("Grid2D: nx and ny must both be >= 4");
  if (dx.rows() != nx || dx.cols() != ny || dy.rows() != nx || dy.cols() != ny)
    throw std::invalid_argument("Grid2D: spacing field shape mismatch");
  if (mask.rows() != nx || mask.cols() != ny)
    throw std::invalid_argument("Grid2D: mask shape mismatch");
  if (!(dx > 0).all() || !(dy > 0).all())
    throw std::invalid_argument("Grid2D: grid spacing must be strictly positive");
  if (ghost_width < 0)
    throw std::invalid_argument("Grid2D: ghost_width must be >= 0");
}

void ScaleField::validate(const Grid2D& grid) const {
  if (rx.rows() != grid.nx || rx.cols() != grid.ny || ry.rows() != grid.nx ||
      ry.cols() != grid.ny)
    throw std::invalid_argument("ScaleField: shape does not match grid");
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) {
      if (!grid.mask(i, j)) continue;
      const Scalar sx = rx(i, j) / grid.dx(i, j);
      const Scalar sy = ry(i, j) / grid.dy(i, j);
      if (!(rx(i, j) > 0) || !(ry(i, j) > 0) || !std::isfinite(sx) ||
          !std::isfinite(sy))
        throw std::invalid_argument(
            "ScaleField: non-positive or non-finite radius at sea point (" +
            std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

Field ScaleField::sigma_x(const Grid2D& grid) const {
  return grid.mask.select(rx / grid.dx, Field::Ones(grid.nx, grid.ny));
}

Field ScaleField::sigma_y(const Grid2D& grid) const {
  return grid.mask.select(ry / grid.dy, Field::Ones(grid.nx, grid.ny));
}

Scalar ScaleField::max_sigma(const Grid2D& grid) const {
  return std::max(sigma_x(grid).maxCoeff(), sigma_y(grid).maxCoeff());
}

ScaleField uniform_scale(const Grid2D& grid, Scalar r) {
  if (!(r > 0))
    throw std::invalid_argument("uniform_scale: radius must be positive");
  ScaleField s;
  s.rx = Field::Constant(grid.nx, grid.ny, r);
  s.ry = Field::Constant(grid.nx, grid.ny, r);
  return s;
}

}  // namespace rgf
