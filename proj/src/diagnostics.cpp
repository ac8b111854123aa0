/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/diagnostics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rgf/parallel.hpp"
#include "rgf/rf1.hpp"
#include "rgf/rf3.hpp"

namespace rgf {

namespace {

Vector apply_filter_1d(const Vector& s0, Scalar sigma, FilterOrder order, int k,
                       Rf3Calibration calibration, bool unit_dc) {
  const Index m = s0.size();
  const ArrayX<Scalar> sig = ArrayX<Scalar>::Constant(m, sigma);
  Vector out = s0;
  if (order == FilterOrder::first) {
    const auto c = rf1_coefficients(sig, k);
    rf1_filter_in_place<Scalar>(out, c);
  } else {
    if (k != 1)
      throw std::invalid_argument(
          "the third-order filter is single-iteration by construction");
    const auto c = rf3_filter_coefficients(sig, calibration);
    rf3_filter_in_place<Scalar>(out, c);
    if (unit_dc) out /= std::sqrt(2.0 * std::numbers::pi) * sigma;
  }
  return out;
}

// Unit-sum sampled Gaussian kernel on offsets [-radius, radius].
Vector gaussian_kernel(Scalar sigma, Index radius) {
  Vector k(2 * radius + 1);
  for (Index o = -radius; o <= radius; ++o)
    k[o + radius] = std::exp(-Scalar(o * o) / (2 * sigma * sigma));
  return k / k.sum();
}

// Direct discrete convolution restricted to the segment (the accuracy oracle).
Vector convolve_same(const Vector& s0, const Vector& kernel, Index radius) {
  const Index m = s0.size();
  Vector out = Vector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    const Index lo = std::max<Index>(0, i - radius);
    const Index hi = std::min<Index>(m - 1, i + radius);
    Scalar acc = 0;
    for (Index j = lo; j <= hi; ++j) acc += kernel[i - j + radius] * s0[j];
    out[i] = acc;
  }
  return out;
}

}  // namespace

ImpulseReport impulse_response(Scalar sigma, FilterOrder order, int k,
                               Index length, Rf3Calibration calibration) {
  if (length < 4)
    throw std::invalid_argument("impulse_response: length must be >= 4");
  if (!(sigma > 0))
    throw std::invalid_argument("impulse_response: sigma must be positive");

  ImpulseReport r;
  r.sigma = sigma;
  r.order = order;
  r.k = k;

  const Index c = length / 2;
  Vector dirac = Vector::Zero(length);
  dirac[c] = 1.0;
  r.h = apply_filter_1d(dirac, sigma, order, k, calibration, /*unit_dc=*/false);

  r.g.resize(length);
  for (Index i = 0; i < length; ++i)
    r.g[i] = std::exp(-Scalar((i - c) * (i - c)) / (2 * sigma * sigma));

  r.sum_h = r.h.sum();
  const Vector diff = r.h / r.sum_h - r.g / r.g.sum();
  r.err_h_l2 = diff.norm();
  r.err_h_max = diff.cwiseAbs().maxCoeff();
  return r;
}

void write_impulse_csv(const ImpulseReport& report,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "offset,h,g\n";
  out.precision(17);
  const Index c = report.h.size() / 2;
  for (Index i = 0; i < report.h.size(); ++i)
    out << (i - c) << ',' << report.h[i] << ',' << report.g[i] << '\n';
}

Remark1Report remark1_bound_check(const Vector& s0, Scalar sigma,
                                  FilterOrder order, int k,
                                  Rf3Calibration calibration) {
  const Index m = s0.size();
  if (m < 4) throw std::invalid_argument("remark1_bound_check: input too short");
  if (!s0.allFinite())
    throw std::invalid_argument("remark1_bound_check: input must be finite");

  const Index c = m / 2;
  const Index radius =
      std::min<Index>(static_cast<Index>(std::ceil(8 * sigma)), std::min(c, m - 1 - c));
  const Vector kernel = gaussian_kernel(sigma, radius);

  Vector dirac = Vector::Zero(m);
  dirac[c] = 1.0;
  const Vector h = apply_filter_1d(dirac, sigma, order, k, calibration, true);
  Vector g_centered = Vector::Zero(m);
  g_centered.segment(c - radius, 2 * radius + 1) = kernel;

  Remark1Report r;
  r.err_h_l2 = (g_centered - h).norm();
  const Vector s_true = convolve_same(s0, kernel, radius);
  const Vector s_filt = apply_filter_1d(s0, sigma, order, k, calibration, true);
  r.lhs = (s_true - s_filt).norm();
  r.rhs = r.err_h_l2 * s0.norm();
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-9);
  return r;
}

Scalar rational_gauss_check() {
  const Scalar inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  Scalar max_err = 0;
  for (int i = -6000; i <= 6000; ++i) {
    const Scalar t = Scalar(i) * 1e-3;
    const Scalar truth = inv_sqrt_2pi * std::exp(-0.5 * t * t);
    max_err = std::max(max_err, std::abs(rational_gauss(t) - truth));
  }
  return max_err;
}

Scalar ComplexityModel::predicted_seconds() const {
  return predict_time(order, k, m, t_calc);
}

Scalar predict_time(int order, int k, Index m, Scalar t_calc) {
  return 2.0 * (2.0 * order + 1.0) * Scalar(m) * Scalar(k) * t_calc;
}

Scalar calibrate_t_calc(long long iterations) {
  if (iterations < 1)
    throw std::invalid_argument("calibrate_t_calc: iterations must be >= 1");
  volatile Scalar sink = 0.0;
  Scalar acc = 1.0;
  const Scalar a = 1.0000000001, b = 1e-12;
  const auto start = std::chrono::steady_clock::now();
  for (long long i = 0; i < iterations; ++i) acc = acc * a + b;
  const auto stop = std::chrono::steady_clock::now();
  sink = acc;
  (void)sink;
  return std::chrono::duration<Scalar>(stop - start).count() /
         Scalar(iterations);
}

FilterTiming measure_filter_time(const HorizontalCovarianceOp& op,
                                 const StateField& field, int repeats) {
  if (repeats < 1)
    throw std::invalid_argument("measure_filter_time: repeats must be >= 1");
  FilterTiming t;
  t.coefficient_bytes = op.coefficient_bytes();
  t.threads = resolve_thread_count(op.options().threads);
  t.samples.reserve(repeats);
  volatile Scalar sink = 0;
  for (int rep = 0; rep < repeats; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const StateField out = op.apply_gy(op.apply_gx(field));
    const auto stop = std::chrono::steady_clock::now();
    sink = sink + out.values(0, 0);
    t.samples.push_back(std::chrono::duration<Scalar>(stop - start).count());
  }
  (void)sink;
  std::vector<Scalar> sorted = t.samples;
  std::sort(sorted.begin(), sorted.end());
  t.median_seconds = sorted[sorted.size() / 2];
  return t;
}

ScaleQuality check_scale_quality(const ScaleField& scales, const Grid2D& grid) {
  const Field sx = scales.sigma_x(grid);
  const Field sy = scales.sigma_y(grid);
  ScaleQuality q;
  q.min_sigma = std::numeric_limits<Scalar>::infinity();
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) {
      if (!grid.mask(i, j)) continue;
      const Scalar s = std::min(sx(i, j), sy(i, j));
      q.min_sigma = std::min(q.min_sigma, s);
      if (s < 0.25) ++q.degenerate_points;
    }
  if (!std::isfinite(q.min_sigma)) q.min_sigma = 0;
  return q;
}

}  // namespace rgf
