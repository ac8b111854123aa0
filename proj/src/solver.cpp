/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/solver.hpp"

#include <cmath>

namespace rgf {

namespace {

Scalar dot(const Field& a, const Field& b) { return (a * b).sum(); }

Vector compute_misfit(const ObsSet& obs, const HorizontalCovarianceOp& op,
                      const StateField* background) {
  if (background == nullptr) return obs.values;
  require_on_grid(*background, op.grid(), "solve");
  return misfit(obs_operator(*background, obs), obs);
}

// V^T H^T (v ./ r_var) as a field
Field adjoint_rhs(const Vector& v, const ObsSet& obs,
                  const HorizontalCovarianceOp& op) {
  const Vector scaled = v.array() / obs.r_var.array();
  return op.apply_v_transpose(obs_operator_transpose(scaled, obs, op.grid()))
      .values;
}

}  // namespace

CostReport cost(const StateField& chi, const ObsSet& obs,
                const HorizontalCovarianceOp& op, const StateField* background) {
  require_on_grid(chi, op.grid(), "cost");
  obs.validate(op.grid());
  const Vector d = compute_misfit(obs, op, background);

  const StateField vchi = op.apply_v(chi);
  const Vector residual = d - obs_operator(vchi, obs);

  CostReport r;
  r.j_background = 0.5 * dot(chi.values, chi.values);
  r.j_obs = 0.5 * (residual.array().square() / obs.r_var.array()).sum();
  r.j_total = r.j_background + r.j_obs;
  r.gradient = chi.values - adjoint_rhs(residual, obs, op);
  return r;
}

Analysis solve(const ObsSet& obs, const HorizontalCovarianceOp& op,
               SolveOptions options, const StateField* background) {
  if (!(options.tol > 0)) throw std::invalid_argument("solve: tol must be positive");
  if (options.max_iter < 0)
    throw std::invalid_argument("solve: max_iter must be >= 0");
  obs.validate(op.grid());

  Analysis an;
  an.increment = StateField::zeros(op.grid());
  an.misfit = compute_misfit(obs, op, background);

  if (obs.size() == 0) {
    an.converged = true;
    return an;
  }

  const Field b = adjoint_rhs(an.misfit, obs, op);
  const Scalar bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0) {
    an.converged = true;
    return an;
  }

  Field chi = Field::Zero(op.grid().nx, op.grid().ny);
  Field r = b;
  Field p = r;
  Scalar rs = dot(r, r);
  an.gradient_norms.push_back(std::sqrt(rs));

  const auto apply_hessian = [&](const Field& x) -> Field {
    const StateField vx = op.apply_v({&op.grid(), x});
    const Vector hv = obs_operator(vx, obs);
    return x + adjoint_rhs(hv, obs, op);
  };

  for (int it = 0; it < options.max_iter; ++it) {
    const Field ap = apply_hessian(p);
    const Scalar denom = dot(p, ap);
    if (denom <= 0) break;  // numerically exhausted search direction
    const Scalar alpha = rs / denom;
    chi += alpha * p;
    r -= alpha * ap;
    const Scalar rs_next = dot(r, r);
    an.cg_iterations = it + 1;
    an.gradient_norms.push_back(std::sqrt(rs_next));
    if (std::sqrt(rs_next) <= options.tol * bnorm) {
      an.converged = true;
      rs = rs_next;
      break;
    }
    p = r + (rs_next / rs) * p;
    rs = rs_next;
  }

  an.final_relative_residual = an.gradient_norms.back() / bnorm;
  an.converged = an.final_relative_residual <= options.tol;

  an.increment = op.apply_v({&op.grid(), chi});
  const Vector residual = an.misfit - obs_operator(an.increment, obs);
  an.j_background = 0.5 * dot(chi, chi);
  an.j_obs = 0.5 * (residual.array().square() / obs.r_var.array()).sum();
  return an;
}

}  // namespace rgf
