/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <filesystem>
#include <vector>

#include "rgf/covariance.hpp"
#include "rgf/grid.hpp"
#include "rgf/types.hpp"

namespace rgf {

// Impulse response of a filter configuration against the sampled Gaussian
// g_i = exp(-x^2 / (2 sigma^2)). Errors are computed after normalizing both
// curves to unit sum, so the two filter orders are directly comparable.
struct ImpulseReport {
  Scalar sigma = 0;
  FilterOrder order = FilterOrder::third;
  int k = 1;
  Vector h;  // raw impulse response (Dirac at length/2)
  Vector g;  // sampled reference Gaussian at the same offsets
  Scalar err_h_l2 = 0;
  Scalar err_h_max = 0;
  Scalar sum_h = 0;  // DC sum before normalization
};

ImpulseReport impulse_response(Scalar sigma, FilterOrder order, int k,
                               Index length,
                               Rf3Calibration calibration = Rf3Calibration::yvv95);

void write_impulse_csv(const ImpulseReport& report,
                       const std::filesystem::path& path);

// Checks the accuracy inequality ||eps_s||_2 <= ||eps_h||_2 ||s0||_2 for one
// input: the left side compares the filter output against a direct discrete
// convolution with the truncated sampled Gaussian (the oracle), the right
// side uses the impulse-response error of the same configuration. The filter
// runs in unit-DC mode so both sides reference the unit-sum kernel. Near
// boundaries the filter is not a convolution and the inequality may fail;
// results are reported, not asserted.
struct Remark1Report {
  Scalar lhs = 0;
  Scalar rhs = 0;
  Scalar err_h_l2 = 0;
  bool holds = false;
};

Remark1Report remark1_bound_check(const Vector& s0, Scalar sigma,
                                  FilterOrder order, int k,
                                  Rf3Calibration calibration = Rf3Calibration::yvv95);

// Max abs deviation of the four-term rational approximation from the
// standard Gaussian density over t in [-6,6] on a 1e-3 grid.
Scalar rational_gauss_check();

// T(n,K,m) = 2 (2n+1) m K t_calc
struct ComplexityModel {
  int order = 1;
  int k = 1;
  Index m = 0;
  Scalar t_calc = 0;
  Scalar predicted_seconds() const;
};

Scalar predict_time(int order, int k, Index m, Scalar t_calc);

// Seconds per floating-point operation, calibrated by timing a fused
// multiply-add loop.
Scalar calibrate_t_calc(long long iterations = 100000000LL);

struct FilterTiming {
  Scalar median_seconds = 0;
  std::vector<Scalar> samples;
  std::size_t coefficient_bytes = 0;
  int threads = 1;
};

// Median wall-clock time of one V_H application (both directional sweeps)
// over the given number of repeats.
FilterTiming measure_filter_time(const HorizontalCovarianceOp& op,
                                 const StateField& field, int repeats);

// Flags degenerate length scales (kernel narrower than a quarter cell).
struct ScaleQuality {
  Index degenerate_points = 0;
  Scalar min_sigma = 0;
};

ScaleQuality check_scale_quality(const ScaleField& scales, const Grid2D& grid);

}  // namespace rgf
