/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <vector>

#include "rgf/covariance.hpp"
#include "rgf/grid.hpp"
#include "rgf/obs.hpp"
#include "rgf/types.hpp"

namespace rgf {

struct SolveOptions {
  Scalar tol = 1e-6;  // relative residual target
  int max_iter = 30;
};

struct Analysis {
  StateField increment;                // delta x = V chi
  Vector misfit;                       // d = y - H(x_b)
  int cg_iterations = 0;
  std::vector<Scalar> gradient_norms;  // residual norm per CG iteration
  bool converged = false;
  Scalar final_relative_residual = 0;
  Scalar j_background = 0;             // cost decomposition at the solution
  Scalar j_obs = 0;
};

struct CostReport {
  Scalar j_total;
  Scalar j_background;
  Scalar j_obs;
  Field gradient;
};

// Quadratic cost in the control variable chi (delta x = V chi):
//   J(chi) = 1/2 <chi,chi> + 1/2 (d - H V chi)^T R^-1 (d - H V chi)
// with gradient chi + V^T H^T R^-1 (H V chi - d).
CostReport cost(const StateField& chi, const ObsSet& obs,
                const HorizontalCovarianceOp& op,
                const StateField* background = nullptr);

// Minimizes J by conjugate gradients on the symmetric positive definite
// system (I + V^T H^T R^-1 H V) chi = V^T H^T R^-1 d, then maps back to the
// increment. The mapped increment solves (I + B H^T R^-1 H) dx = B H^T R^-1 d
// with B = V V^T. Hitting max_iter returns the current iterate flagged, not
// an error.
Analysis solve(const ObsSet& obs, const HorizontalCovarianceOp& op,
               SolveOptions options = {}, const StateField* background = nullptr);

}  // namespace rgf
