/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Command-line front end: coefficient inspection, 1D impulse studies, field
// filtering, single-variable 3D-VAR analyses, and filter benchmarks. Every
// command writes deterministic files given identical inputs. Exit codes:
// 0 success, 1 runtime failure, 2 usage error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgf/covariance.hpp"
#include "rgf/diagnostics.hpp"
#include "rgf/io.hpp"
#include "rgf/parallel.hpp"
#include "rgf/rf1.hpp"
#include "rgf/rf3.hpp"
#include "rgf/solver.hpp"

namespace {

using nlohmann::json;
using namespace rgf;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rf3Calibration parse_calibration(const std::string& name) {
  if (name == "yvv95") return Rf3Calibration::yvv95;
  if (name == "variance") return Rf3Calibration::variance_match;
  if (name == "none") return Rf3Calibration::none;
  throw UsageError("unknown calibration \"" + name + "\"");
}

FilterOrder parse_order(int order) {
  if (order == 1) return FilterOrder::first;
  if (order == 3) return FilterOrder::third;
  throw UsageError("order must be 1 or 3");
}

// Optional JSON run-spec; its values override the parsed flags.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j;
  in >> j;
  return j;
}

template <typename T>
void override_from(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg[key].get<T>();
}

struct CoeffsArgs {
  double sigma = 1.0;
  int order = 3;
  int k = 1;
  std::string calibration = "yvv95";
};

int run_coeffs(const CoeffsArgs& a) {
  if (!(a.sigma > 0)) throw UsageError("--sigma must be positive");
  const FilterOrder order = parse_order(a.order);
  json out{{"sigma", a.sigma}, {"order", a.order}};
  if (order == FilterOrder::first) {
    if (a.k < 1) throw UsageError("--k must be >= 1");
    const auto c = rf1_coefficients(a.sigma, a.k);
    out["k"] = a.k;
    out["alpha"] = c.alpha;
    out["beta"] = c.beta;
  } else {
    if (a.k != 1)
      throw UsageError("the third-order filter is single-iteration (--k 1)");
    const auto t = rf3_coefficients(a.sigma);
    out["polynomials"] = {{"a0", t.a0},         {"a1", t.a1},
                      {"a2", t.a2},         {"a3", t.a3},
                      {"alpha1", t.alpha1}, {"alpha2", t.alpha2},
                      {"alpha3", t.alpha3}, {"beta", t.beta}};
    const auto f = rf3_filter_scalars(a.sigma, parse_calibration(a.calibration));
    out["filter"] = {{"q", f.q},           {"alpha1", f.alpha1},
                     {"alpha2", f.alpha2}, {"alpha3", f.alpha3},
                     {"beta", f.beta},     {"calibration", a.calibration}};
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

struct ImpulseArgs {
  double sigma = 2.0;
  int order = 3;
  int k = 1;
  Index length = 300;
  std::string out;
  std::string calibration = "yvv95";
};

int run_impulse(const ImpulseArgs& a) {
  if (!(a.sigma > 0)) throw UsageError("--sigma must be positive");
  const FilterOrder order = parse_order(a.order);
  if (order == FilterOrder::third && a.k != 1)
    throw UsageError("the third-order filter is single-iteration (--k 1)");
  if (order == FilterOrder::first && a.k < 1) throw UsageError("--k must be >= 1");
  if (a.length < 4) throw UsageError("--length must be >= 4");

  const ImpulseReport r = impulse_response(a.sigma, order, a.k, a.length,
                                           parse_calibration(a.calibration));
  if (!a.out.empty()) write_impulse_csv(r, a.out);
  json j{{"sigma", r.sigma},       {"order", a.order},
         {"k", r.k},               {"length", a.length},
         {"err_h_l2", r.err_h_l2}, {"err_h_max", r.err_h_max},
         {"sum_h", r.sum_h}};
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

struct FieldJobArgs {
  std::string grid, scales, input, output, background, obs, diag;
  double radius = 0.0;
  int order = 3;
  int k = 1;
  bool unit_dc = false;
  std::string direction = "both";
  double tol = 1e-6;
  int max_iter = 30;
  Index ghost_width = -1;
  int threads = 0;
  std::string calibration = "yvv95";
};

CovarianceOptions covariance_options(const FieldJobArgs& a, bool unit_dc) {
  CovarianceOptions o;
  o.order = parse_order(a.order);
  if (o.order == FilterOrder::third && a.k != 1)
    throw UsageError("the third-order filter is single-iteration (--k 1)");
  if (o.order == FilterOrder::first && a.k < 1) throw UsageError("--k must be >= 1");
  o.k_iterations = a.k;
  o.unit_dc = unit_dc;
  if (a.ghost_width >= 0) o.ghost_width = a.ghost_width;
  o.threads = a.threads;
  o.calibration = parse_calibration(a.calibration);
  return o;
}

ScaleField resolve_scales(const FieldJobArgs& a, const Grid2D& grid) {
  if (!a.scales.empty() && a.radius > 0)
    throw UsageError("--scales and --radius are mutually exclusive");
  if (!a.scales.empty()) return load_scale_field(a.scales, grid);
  if (a.radius > 0) return uniform_scale(grid, a.radius);
  throw UsageError("either --scales or --radius is required");
}

void warn_degenerate_scales(const ScaleField& s, const Grid2D& g) {
  const ScaleQuality q = check_scale_quality(s, g);
  if (q.degenerate_points > 0)
    std::cerr << "warning: " << q.degenerate_points
              << " sea points have length scales below a quarter cell (min sigma "
              << q.min_sigma << ")\n";
}

int run_filter(const FieldJobArgs& a) {
  if (a.direction != "x" && a.direction != "y" && a.direction != "both")
    throw UsageError("--direction must be x, y or both");
  const CovarianceOptions o = covariance_options(a, a.unit_dc);

  const Grid2D grid = load_grid(a.grid);
  const ScaleField scales = resolve_scales(a, grid);
  warn_degenerate_scales(scales, grid);
  const HorizontalCovarianceOp op(grid, scales, o);

  StateField f = load_state_field(a.input, grid);
  if (a.direction == "x" || a.direction == "both") f = op.apply_gx(f);
  if (a.direction == "y" || a.direction == "both") f = op.apply_gy(f);
  save_state_field(f, a.output);
  return kExitOk;
}

int run_assimilate(const FieldJobArgs& a) {
  const CovarianceOptions o = covariance_options(a, /*unit_dc=*/true);
  if (!(a.tol > 0)) throw UsageError("--tol must be positive");
  if (a.max_iter < 0) throw UsageError("--max-iter must be >= 0");

  const Grid2D grid = load_grid(a.grid);
  const ScaleField scales = resolve_scales(a, grid);
  warn_degenerate_scales(scales, grid);
  const HorizontalCovarianceOp op(grid, scales, o);

  const ObsSet obs = load_obs(a.obs);
  std::optional<StateField> background;
  if (!a.background.empty()) background = load_state_field(a.background, grid);

  const Analysis an = solve(obs, op, {.tol = a.tol, .max_iter = a.max_iter},
                            background ? &*background : nullptr);
  save_state_field(an.increment, a.output);

  json diag{{"order", a.order},
            {"k", a.k},
            {"observations", obs.size()},
            {"cg_iterations", an.cg_iterations},
            {"converged", an.converged},
            {"final_relative_residual", an.final_relative_residual},
            {"gradient_norms", an.gradient_norms},
            {"misfit_norm", an.misfit.norm()},
            {"j_background", an.j_background},
            {"j_obs", an.j_obs},
            {"j_total", an.j_background + an.j_obs},
            {"tol", a.tol},
            {"max_iter", a.max_iter},
            {"threads", resolve_thread_count(a.threads)}};
  if (!an.converged)
    std::cerr << "warning: CG stopped at max_iter with relative residual "
              << an.final_relative_residual << '\n';
  if (!a.diag.empty()) {
    std::ofstream out(a.diag);
    if (!out) throw std::runtime_error("cannot write " + a.diag);
    out << diag.dump(2) << '\n';
  } else {
    std::cout << diag.dump(2) << '\n';
  }
  return kExitOk;
}

struct BenchArgs {
  Index grid_size = 1024;
  std::vector<int> orders{1, 3};
  std::vector<int> ks{1, 5, 10};
  int repeats = 3;
  int threads = 1;
  std::string out;
  std::string calibration = "yvv95";
};

int run_bench(const BenchArgs& a) {
  if (a.grid_size < 4) throw UsageError("--grid-size must be >= 4");
  if (a.repeats < 1) throw UsageError("--repeats must be >= 1");
  for (const int o : a.orders) parse_order(o);

  const Grid2D grid = Grid2D::uniform(a.grid_size, a.grid_size, 6000.0, 6000.0);
  const ScaleField scales = uniform_scale(grid, 12000.0);
  StateField field = StateField::zeros(grid);
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i)
      field.values(i, j) = std::sin(Scalar(i) / 7.0) + std::cos(Scalar(j) / 5.0);

  const Scalar t_calc = calibrate_t_calc();
  json runs = json::array();
  for (const int order : a.orders) {
    const std::vector<int> ks = order == 1 ? a.ks : std::vector<int>{1};
    for (const int k : ks) {
      CovarianceOptions o;
      o.order = parse_order(order);
      o.k_iterations = k;
      o.threads = a.threads;
      o.calibration = parse_calibration(a.calibration);
      const HorizontalCovarianceOp op(grid, scales, o);
      const FilterTiming t = measure_filter_time(op, field, a.repeats);
      // Eq.-style prediction: one directional pass over every point, both
      // directions
      const Scalar predicted =
          2.0 * predict_time(order, k, grid.nx * grid.ny, t_calc);
      runs.push_back({{"order", order},
                      {"k", k},
                      {"median_seconds", t.median_seconds},
                      {"samples", t.samples},
                      {"predicted_seconds", predicted},
                      {"measured_over_predicted", t.median_seconds / predicted},
                      {"coefficient_bytes", t.coefficient_bytes}});
    }
  }
  json out{{"grid_size", a.grid_size},
           {"repeats", a.repeats},
           {"low_confidence", a.repeats < 2},
           {"threads", resolve_thread_count(a.threads)},
           {"t_calc_seconds", t_calc},
           {"runs", runs}};
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << out.dump(2) << '\n';
  } else {
    std::cout << out.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursive Gaussian filters for variational ocean analysis"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON run-spec whose values override flags")
      ->configurable(false);

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "print filter coefficients");
  coeffs->add_option("--sigma", ca.sigma, "non-dimensional length scale R/dx");
  coeffs->add_option("--order", ca.order, "filter order (1 or 3)");
  coeffs->add_option("--k", ca.k, "iterations of the first-order filter");
  coeffs->add_option("--calibration", ca.calibration, "yvv95|variance|none");

  ImpulseArgs ia;
  auto* impulse =
      app.add_subcommand("impulse", "impulse response vs the sampled Gaussian");
  impulse->add_option("--sigma", ia.sigma, "non-dimensional length scale");
  impulse->add_option("--order", ia.order, "filter order (1 or 3)");
  impulse->add_option("--k", ia.k, "iterations of the first-order filter");
  impulse->add_option("--length", ia.length, "segment length");
  impulse->add_option("--out", ia.out, "CSV output path (offset,h,g)");
  impulse->add_option("--calibration", ia.calibration, "yvv95|variance|none");

  FieldJobArgs fa;
  auto* filter = app.add_subcommand("filter", "apply the smoothing operator");
  filter->add_option("--grid", fa.grid, "grid file")->required();
  filter->add_option("--scales", fa.scales, "scale-field file");
  filter->add_option("--radius", fa.radius, "uniform correlation radius (m)");
  filter->add_option("--order", fa.order, "filter order (1 or 3)");
  filter->add_option("--k", fa.k, "iterations of the first-order filter");
  filter->add_option("--in", fa.input, "input field file")->required();
  filter->add_option("--out", fa.output, "output field file")->required();
  filter->add_flag("--unit-dc", fa.unit_dc, "rescale to unit DC gain");
  filter->add_option("--direction", fa.direction, "x, y or both");
  filter->add_option("--ghost-width", fa.ghost_width,
                     "imaginary sea points at coastlines");
  filter->add_option("--threads", fa.threads, "sweep parallelism")
      ->envname("RGFVAR_THREADS");
  filter->add_option("--calibration", fa.calibration, "yvv95|variance|none");

  FieldJobArgs aa;
  auto* assim = app.add_subcommand("assimilate", "single-variable 3D-VAR analysis");
  assim->add_option("--grid", aa.grid, "grid file")->required();
  assim->add_option("--scales", aa.scales, "scale-field file");
  assim->add_option("--radius", aa.radius, "uniform correlation radius (m)");
  assim->add_option("--obs", aa.obs, "observation CSV")->required();
  assim->add_option("--order", aa.order, "filter order (1 or 3)");
  assim->add_option("--k", aa.k, "iterations of the first-order filter");
  assim->add_option("--tol", aa.tol, "CG relative-residual tolerance");
  assim->add_option("--max-iter", aa.max_iter, "CG iteration cap");
  assim->add_option("--out", aa.output, "increment field output")->required();
  assim->add_option("--diag", aa.diag, "JSON diagnostics path (default stdout)");
  assim->add_option("--background", aa.background, "background field file");
  assim->add_option("--ghost-width", aa.ghost_width,
                    "imaginary sea points at coastlines");
  assim->add_option("--threads", aa.threads, "sweep parallelism")
      ->envname("RGFVAR_THREADS");
  assim->add_option("--calibration", aa.calibration, "yvv95|variance|none");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "filter-routine timings");
  bench->add_option("--grid-size", ba.grid_size, "square grid edge length");
  bench->add_option("--orders", ba.orders, "filter orders to time")
      ->delimiter(',');
  bench->add_option("--ks", ba.ks, "iteration counts for the first order")
      ->delimiter(',');
  bench->add_option("--repeats", ba.repeats, "timing repetitions");
  bench->add_option("--threads", ba.threads, "sweep parallelism")
      ->envname("RGFVAR_THREADS");
  bench->add_option("--out", ba.out, "JSON output path (default stdout)");
  bench->add_option("--calibration", ba.calibration, "yvv95|variance|none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const json cfg = load_config(config_path);
    if (coeffs->parsed()) {
      override_from(cfg, "sigma", ca.sigma);
      override_from(cfg, "order", ca.order);
      override_from(cfg, "k", ca.k);
      override_from(cfg, "calibration", ca.calibration);
      return run_coeffs(ca);
    }
    if (impulse->parsed()) {
      override_from(cfg, "sigma", ia.sigma);
      override_from(cfg, "order", ia.order);
      override_from(cfg, "k", ia.k);
      override_from(cfg, "length", ia.length);
      override_from(cfg, "out", ia.out);
      override_from(cfg, "calibration", ia.calibration);
      return run_impulse(ia);
    }
    const auto apply_field_cfg = [&cfg](FieldJobArgs& a) {
      override_from(cfg, "grid", a.grid);
      override_from(cfg, "scales", a.scales);
      override_from(cfg, "radius", a.radius);
      override_from(cfg, "order", a.order);
      override_from(cfg, "k", a.k);
      override_from(cfg, "in", a.input);
      override_from(cfg, "out", a.output);
      override_from(cfg, "obs", a.obs);
      override_from(cfg, "tol", a.tol);
      override_from(cfg, "max_iter", a.max_iter);
      override_from(cfg, "unit_dc", a.unit_dc);
      override_from(cfg, "direction", a.direction);
      override_from(cfg, "ghost_width", a.ghost_width);
      override_from(cfg, "threads", a.threads);
      override_from(cfg, "calibration", a.calibration);
    };
    if (filter->parsed()) {
      apply_field_cfg(fa);
      return run_filter(fa);
    }
    if (assim->parsed()) {
      apply_field_cfg(aa);
      return run_assimilate(aa);
    }
    if (bench->parsed()) {
      override_from(cfg, "grid_size", ba.grid_size);
      override_from(cfg, "orders", ba.orders);
      override_from(cfg, "ks", ba.ks);
      override_from(cfg, "repeats", ba.repeats);
      override_from(cfg, "threads", ba.threads);
      override_from(cfg, "out", ba.out);
      override_from(cfg, "calibration", ba.calibration);
      return run_bench(ba);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
