/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <optional>

#include "rgf/grid.hpp"
#include "rgf/types.hpp"

namespace rgf {

struct CovarianceOptions {
  FilterOrder order = FilterOrder::third;
  int k_iterations = 1;          // iterations of the first-order cascade
  bool unit_dc = true;           // rescale the third-order output to unit DC gain
  std::optional<Index> ghost_width;  // unset: grid value, else ceil(9 max sigma)
  std::optional<Field> variance;     // per-point background-error std, default 1
  int threads = 0;                   // 0 = hardware concurrency
  Rf3Calibration calibration = Rf3Calibration::yvv95;
};

// Separable horizontal smoothing operator V_H = G_y G_x on a masked grid,
// its exact algebraic transpose, and the composed applications
//   V  = diag(variance) . G_y . G_x
//   B  = V V^T.
// Each row/column decomposes into contiguous sea segments; segments bounded
// by land are extended with zero-valued imaginary sea points before the
// recursion runs, and the extension is discarded afterwards. Land points stay
// exactly zero.
class HorizontalCovarianceOp {
 public:
  HorizontalCovarianceOp(const Grid2D& grid, const ScaleField& scales,
                         CovarianceOptions options = {});

  StateField apply_gx(const StateField& field) const;
  StateField apply_gy(const StateField& field) const;
  StateField apply_gx_transpose(const StateField& field) const;
  StateField apply_gy_transpose(const StateField& field) const;

  StateField apply_v(const StateField& field) const;
  StateField apply_v_transpose(const StateField& field) const;
  StateField apply_b(const StateField& field) const;

  const Grid2D& grid() const { return *grid_; }
  const CovarianceOptions& options() const { return options_; }
  Index effective_ghost_width() const { return ghost_; }

  // Storage held by the per-point filter coefficient tables (alpha/beta per
  // direction): two values per point for the first-order filter, four for the
  // third-order one.
  std::size_t coefficient_bytes() const;

 private:
  enum class Dir { x, y };

  Field sweep(const Field& in, Dir dir, bool transpose) const;
  void sweep_line(const Field& in, Field& out, Dir dir, bool transpose,
                  Index line) const;

  const Grid2D* grid_;
  CovarianceOptions options_;
  Index ghost_ = 0;

  // Per-point coefficients per sweep direction. The first-order filter uses
  // alpha1/beta only. Constant length scales are the common case; sweeps then
  // hold the coefficients in registers and skip the per-line gathers.
  struct DirCoefficients {
    Field alpha1, alpha2, alpha3, beta;
    Field inv_dc;  // derived unit-DC rescaling table (third order only)
    bool uniform = false;
    Scalar u_alpha1 = 0, u_alpha2 = 0, u_alpha3 = 0, u_beta = 0, u_inv_dc = 1;
  };
  DirCoefficients cx_, cy_;
};

}  // namespace rgf
