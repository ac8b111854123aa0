/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/covariance.hpp"

#include <cmath>
#include <numbers>

#include "rgf/parallel.hpp"
#include "rgf/rf1.hpp"
#include "rgf/rf3.hpp"

namespace rgf {

namespace {

struct SweepScratch {
  Array v, a1, a2, a3, b, inv_dc;
  void resize(Index n, bool values_only) {
    v.resize(n);
    if (values_only) return;
    a1.resize(n);
    a2.resize(n);
    a3.resize(n);
    b.resize(n);
    inv_dc.resize(n);
  }
};

thread_local SweepScratch scratch;

// Gathers a source line segment [lo, lo+len) into dst[ghost_l .. ), replicating
// the end values into the ghost cells.
template <typename Line>
void gather_with_ghosts(Array& dst, const Line& src, Index lo, Index len,
                        Index ghost_l, Index ghost_r) {
  for (Index k = 0; k < len; ++k) dst[ghost_l + k] = src(lo + k);
  dst.head(ghost_l).setConstant(src(lo));
  dst.tail(ghost_r).setConstant(src(lo + len - 1));
}

// Scalar-coefficient kernels for lines with a constant length scale. The
// arithmetic matches the per-point kernels expression for expression, so both
// paths produce identical results.
void rf1_forward_u(Scalar* s, Scalar a, Scalar b, Index m) {
  Scalar prev = b * s[0];
  s[0] = prev;
  for (Index i = 1; i < m; ++i) {
    prev = b * s[i] + a * prev;
    s[i] = prev;
  }
}

void rf1_backward_u(Scalar* s, Scalar a, Scalar b, Index m) {
  Scalar prev = b * s[m - 1];
  s[m - 1] = prev;
  for (Index i = m - 2; i >= 0; --i) {
    prev = b * s[i] + a * prev;
    s[i] = prev;
  }
}

void rf1_forward_transpose_u(Scalar* w, Scalar a, Scalar b, Index m) {
  Scalar prev = w[m - 1];
  w[m - 1] = b * prev;
  for (Index i = m - 2; i >= 0; --i) {
    const Scalar cur = w[i] + a * prev;
    w[i] = b * cur;
    prev = cur;
  }
}

void rf1_backward_transpose_u(Scalar* w, Scalar a, Scalar b, Index m) {
  Scalar prev = w[0];
  w[0] = b * prev;
  for (Index i = 1; i < m; ++i) {
    const Scalar cur = w[i] + a * prev;
    w[i] = b * cur;
    prev = cur;
  }
}

void rf3_forward_u(Scalar* s, Scalar a1, Scalar a2, Scalar a3, Scalar b,
                   Index m) {
  Scalar pm1 = b * s[0];
  s[0] = pm1;
  Scalar t = b * s[1] + a1 * pm1;
  s[1] = t;
  Scalar pm2 = pm1;
  pm1 = t;
  t = b * s[2] + a1 * pm1 + a2 * pm2;
  s[2] = t;
  Scalar pm3 = pm2;
  pm2 = pm1;
  pm1 = t;
  for (Index i = 3; i < m; ++i) {
    t = b * s[i] + a1 * pm1 + a2 * pm2 + a3 * pm3;
    pm3 = pm2;
    pm2 = pm1;
    pm1 = t;
    s[i] = t;
  }
}

void rf3_backward_u(Scalar* s, Scalar a1, Scalar a2, Scalar a3, Scalar b,
                    Index m) {
  Scalar pm1 = b * s[m - 1];
  s[m - 1] = pm1;
  Scalar t = b * s[m - 2] + a1 * pm1;
  s[m - 2] = t;
  Scalar pm2 = pm1;
  pm1 = t;
  t = b * s[m - 3] + a1 * pm1 + a2 * pm2;
  s[m - 3] = t;
  Scalar pm3 = pm2;
  pm2 = pm1;
  pm1 = t;
  for (Index i = m - 4; i >= 0; --i) {
    t = b * s[i] + a1 * pm1 + a2 * pm2 + a3 * pm3;
    pm3 = pm2;
    pm2 = pm1;
    pm1 = t;
    s[i] = t;
  }
}

void rf3_forward_transpose_u(Scalar* w, Scalar a1, Scalar a2, Scalar a3,
                             Scalar b, Index m) {
  for (Index i = m - 1; i >= 0; --i) {
    const Scalar wi = w[i];
    if (i >= 1) w[i - 1] += a1 * wi;
    if (i >= 2) w[i - 2] += a2 * wi;
    if (i >= 3) w[i - 3] += a3 * wi;
    w[i] = b * wi;
  }
}

void rf3_backward_transpose_u(Scalar* w, Scalar a1, Scalar a2, Scalar a3,
                              Scalar b, Index m) {
  for (Index i = 0; i < m; ++i) {
    const Scalar wi = w[i];
    if (i + 1 < m) w[i + 1] += a1 * wi;
    if (i + 2 < m) w[i + 2] += a2 * wi;
    if (i + 3 < m) w[i + 3] += a3 * wi;
    w[i] = b * wi;
  }
}

}  // namespace

HorizontalCovarianceOp::HorizontalCovarianceOp(const Grid2D& grid,
                                               const ScaleField& scales,
                                               CovarianceOptions options)
    : grid_(&grid), options_(std::move(options)) {
  grid.validate();
  scales.validate(grid);
  if (options_.order == FilterOrder::first && options_.k_iterations < 1)
    throw std::invalid_argument("covariance: k_iterations must be >= 1");
  if (options_.order == FilterOrder::third && options_.k_iterations != 1)
    throw std::invalid_argument(
        "covariance: the third-order filter is single-iteration by construction");
  if (options_.variance &&
      (options_.variance->rows() != grid.nx || options_.variance->cols() != grid.ny))
    throw std::invalid_argument("covariance: variance field shape mismatch");

  const Field sx = scales.sigma_x(grid);
  const Field sy = scales.sigma_y(grid);

  if (options_.ghost_width) {
    ghost_ = *options_.ghost_width;
    if (ghost_ < 0) throw std::invalid_argument("covariance: ghost_width < 0");
  } else if (grid.ghost_width > 0) {
    ghost_ = grid.ghost_width;
  } else {
    ghost_ = static_cast<Index>(std::ceil(9.0 * scales.max_sigma(grid)));
  }

  const auto build = [&](const Field& sigma, DirCoefficients& c) {
    const Index nx = grid.nx, ny = grid.ny;
    c.alpha1.resize(nx, ny);
    c.beta.resize(nx, ny);
    if (options_.order == FilterOrder::first) {
      for (Index j = 0; j < ny; ++j)
        for (Index i = 0; i < nx; ++i) {
          const auto ab = rf1_coefficients(sigma(i, j), options_.k_iterations);
          c.alpha1(i, j) = ab.alpha;
          c.beta(i, j) = ab.beta;
        }
    } else {
      c.alpha2.resize(nx, ny);
      c.alpha3.resize(nx, ny);
      for (Index j = 0; j < ny; ++j)
        for (Index i = 0; i < nx; ++i) {
          const auto f = rf3_filter_scalars(sigma(i, j), options_.calibration);
          c.alpha1(i, j) = f.alpha1;
          c.alpha2(i, j) = f.alpha2;
          c.alpha3(i, j) = f.alpha3;
          c.beta(i, j) = f.beta;
        }
      if (options_.unit_dc)
        c.inv_dc = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
    }
    c.uniform = sigma.minCoeff() == sigma.maxCoeff();
    if (c.uniform) {
      c.u_alpha1 = c.alpha1(0, 0);
      c.u_beta = c.beta(0, 0);
      if (options_.order == FilterOrder::third) {
        c.u_alpha2 = c.alpha2(0, 0);
        c.u_alpha3 = c.alpha3(0, 0);
        if (options_.unit_dc) c.u_inv_dc = c.inv_dc(0, 0);
      }
    }
  };
  build(sx, cx_);
  build(sy, cy_);
}

std::size_t HorizontalCovarianceOp::coefficient_bytes() const {
  const std::size_t per_point = options_.order == FilterOrder::first ? 2 : 4;
  return 2 * per_point * sizeof(Scalar) *
         static_cast<std::size_t>(grid_->nx * grid_->ny);
}

void HorizontalCovarianceOp::sweep_line(const Field& in, Field& out, Dir dir,
                                        bool transpose, Index line) const {
  const bool third = options_.order == FilterOrder::third;
  const bool unit_dc = third && options_.unit_dc;
  const Index min_len = third ? 4 : 2;
  const Index n = dir == Dir::x ? grid_->nx : grid_->ny;
  const DirCoefficients& c = dir == Dir::x ? cx_ : cy_;

  const auto mask_at = [&](Index k) {
    return dir == Dir::x ? grid_->mask(k, line) : grid_->mask(line, k);
  };
  const auto in_at = [&](Index k) {
    return dir == Dir::x ? in(k, line) : in(line, k);
  };
  const auto coeff_line = [&](const Field& f) {
    return [&f, dir, line](Index k) { return dir == Dir::x ? f(k, line) : f(line, k); };
  };

  Index i = 0;
  while (i < n) {
    if (!mask_at(i)) {
      ++i;
      continue;
    }
    Index j = i;
    while (j + 1 < n && mask_at(j + 1)) ++j;
    const Index len = j - i + 1;
    // imaginary sea points only where the segment meets land
    const Index gl = i > 0 ? ghost_ : 0;
    const Index gr = j < n - 1 ? ghost_ : 0;
    const Index ext = len + gl + gr;

    if (ext < min_len) {
      for (Index k = 0; k < len; ++k) {
        if (dir == Dir::x)
          out(i + k, line) = in_at(i + k);
        else
          out(line, i + k) = in_at(i + k);
      }
      i = j + 1;
      continue;
    }

    scratch.resize(ext, c.uniform);
    scratch.v.setZero();
    for (Index k = 0; k < len; ++k) scratch.v[gl + k] = in_at(i + k);
    Scalar* v = scratch.v.data();

    if (c.uniform) {
      if (!transpose) {
        if (third) {
          rf3_forward_u(v, c.u_alpha1, c.u_alpha2, c.u_alpha3, c.u_beta, ext);
          rf3_backward_u(v, c.u_alpha1, c.u_alpha2, c.u_alpha3, c.u_beta, ext);
          if (unit_dc) scratch.v *= c.u_inv_dc;
        } else {
          for (int it = 0; it < options_.k_iterations; ++it) {
            rf1_forward_u(v, c.u_alpha1, c.u_beta, ext);
            rf1_backward_u(v, c.u_alpha1, c.u_beta, ext);
          }
        }
      } else {
        if (third) {
          if (unit_dc) scratch.v *= c.u_inv_dc;
          rf3_backward_transpose_u(v, c.u_alpha1, c.u_alpha2, c.u_alpha3,
                                   c.u_beta, ext);
          rf3_forward_transpose_u(v, c.u_alpha1, c.u_alpha2, c.u_alpha3,
                                  c.u_beta, ext);
        } else {
          for (int it = 0; it < options_.k_iterations; ++it) {
            rf1_backward_transpose_u(v, c.u_alpha1, c.u_beta, ext);
            rf1_forward_transpose_u(v, c.u_alpha1, c.u_beta, ext);
          }
        }
      }
    } else {
      gather_with_ghosts(scratch.a1, coeff_line(c.alpha1), i, len, gl, gr);
      gather_with_ghosts(scratch.b, coeff_line(c.beta), i, len, gl, gr);
      if (third) {
        gather_with_ghosts(scratch.a2, coeff_line(c.alpha2), i, len, gl, gr);
        gather_with_ghosts(scratch.a3, coeff_line(c.alpha3), i, len, gl, gr);
        if (unit_dc)
          gather_with_ghosts(scratch.inv_dc, coeff_line(c.inv_dc), i, len, gl, gr);
      }
      if (!transpose) {
        if (third) {
          detail::rf3_forward(v, scratch.a1.data(), scratch.a2.data(),
                              scratch.a3.data(), scratch.b.data(), ext);
          detail::rf3_backward(v, scratch.a1.data(), scratch.a2.data(),
                               scratch.a3.data(), scratch.b.data(), ext);
          if (unit_dc) scratch.v *= scratch.inv_dc;
        } else {
          for (int it = 0; it < options_.k_iterations; ++it) {
            detail::rf1_forward(v, scratch.a1.data(), scratch.b.data(), ext);
            detail::rf1_backward(v, scratch.a1.data(), scratch.b.data(), ext);
          }
        }
      } else {
        if (third) {
          if (unit_dc) scratch.v *= scratch.inv_dc;
          detail::rf3_backward_transpose(v, scratch.a1.data(), scratch.a2.data(),
                                         scratch.a3.data(), scratch.b.data(),
                                         ext);
          detail::rf3_forward_transpose(v, scratch.a1.data(), scratch.a2.data(),
                                        scratch.a3.data(), scratch.b.data(),
                                        ext);
        } else {
          for (int it = 0; it < options_.k_iterations; ++it) {
            detail::rf1_backward_transpose(v, scratch.a1.data(),
                                           scratch.b.data(), ext);
            detail::rf1_forward_transpose(v, scratch.a1.data(),
                                          scratch.b.data(), ext);
          }
        }
      }
    }

    for (Index k = 0; k < len; ++k) {
      if (dir == Dir::x)
        out(i + k, line) = scratch.v[gl + k];
      else
        out(line, i + k) = scratch.v[gl + k];
    }
    i = j + 1;
  }
}

Field HorizontalCovarianceOp::sweep(const Field& in, Dir dir, bool transpose) const {
  Field out = Field::Zero(grid_->nx, grid_->ny);
  const Index lines = dir == Dir::x ? grid_->ny : grid_->nx;
  parallel_for(lines, options_.threads,
               [&](Index line) { sweep_line(in, out, dir, transpose, line); });
  return out;
}

StateField HorizontalCovarianceOp::apply_gx(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_gx");
  return {grid_, sweep(field.values, Dir::x, false)};
}

StateField HorizontalCovarianceOp::apply_gy(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_gy");
  return {grid_, sweep(field.values, Dir::y, false)};
}

StateField HorizontalCovarianceOp::apply_gx_transpose(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_gx_transpose");
  return {grid_, sweep(field.values, Dir::x, true)};
}

StateField HorizontalCovarianceOp::apply_gy_transpose(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_gy_transpose");
  return {grid_, sweep(field.values, Dir::y, true)};
}

StateField HorizontalCovarianceOp::apply_v(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_v");
  Field out = sweep(sweep(field.values, Dir::x, false), Dir::y, false);
  if (options_.variance) out *= *options_.variance;
  return {grid_, std::move(out)};
}

StateField HorizontalCovarianceOp::apply_v_transpose(const StateField& field) const {
  require_on_grid(field, *grid_, "apply_v_transpose");
  Field scaled =
      options_.variance ? Field(field.values * *options_.variance) : field.values;
  return {grid_, sweep(sweep(scaled, Dir::y, true), Dir::x, true)};
}

StateField HorizontalCovarianceOp::apply_b(const StateField& field) const {
  return apply_v(apply_v_transpose(field));
}

}  // namespace rgf
