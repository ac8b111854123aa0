/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "rgf/diagnostics.hpp"
#include "oracles.hpp"

using namespace rgf;

TEST_CASE("impulse_response: stored errors recompute exactly from h and g") {
  const ImpulseReport r = impulse_response(2.0, FilterOrder::third, 1, 300);
  const Vector diff = r.h / r.h.sum() - r.g / r.g.sum();
  CHECK(r.err_h_l2 == diff.norm());
  CHECK(r.err_h_max == diff.cwiseAbs().maxCoeff());
  CHECK(r.sum_h == r.h.sum());
}

TEST_CASE("impulse_response: convergence ordering of the first-order filter") {
  const double e1 = impulse_response(2.0, FilterOrder::first, 1, 300).err_h_l2;
  const double e5 = impulse_response(2.0, FilterOrder::first, 5, 300).err_h_l2;
  const double e10 = impulse_response(2.0, FilterOrder::first, 10, 300).err_h_l2;
  CHECK(e1 > e5);
  CHECK(e5 > e10);
  const double e3 = impulse_response(2.0, FilterOrder::third, 1, 300).err_h_l2;
  CHECK(e3 <= 1.1 * e10);
}

TEST_CASE("impulse_response: third-order DC sum") {
  const ImpulseReport r = impulse_response(2.0, FilterOrder::third, 1, 300);
  CHECK(r.sum_h == doctest::Approx(std::sqrt(2.0 * std::numbers::pi) * 2.0)
                       .epsilon(0.005));
}

TEST_CASE("impulse_response: argument validation") {
  CHECK_THROWS_AS(impulse_response(2.0, FilterOrder::third, 1, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(impulse_response(0.0, FilterOrder::third, 1, 300),
                  std::invalid_argument);
  CHECK_THROWS_AS(impulse_response(2.0, FilterOrder::third, 2, 300),
                  std::invalid_argument);
}

TEST_CASE("write_impulse_csv emits offset,h,g rows") {
  const ImpulseReport r = impulse_response(2.0, FilterOrder::third, 1, 32);
  const auto path = std::filesystem::temp_directory_path() / "rgf_impulse.csv";
  write_impulse_csv(r, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "offset,h,g");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 32);
  std::filesystem::remove(path);
}

TEST_CASE("remark1: equality for a Dirac input") {
  for (const auto order : {FilterOrder::first, FilterOrder::third}) {
    Vector dirac = Vector::Zero(300);
    dirac[150] = 1.0;
    const auto r = remark1_bound_check(
        dirac, 2.0, order, order == FilterOrder::first ? 10 : 1);
    CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-12));
    CHECK(r.holds);
    CHECK(r.rhs == doctest::Approx(r.err_h_l2).epsilon(1e-12));
  }
}

TEST_CASE("remark1: zero input") {
  const auto r = remark1_bound_check(Vector::Zero(300), 2.0, FilterOrder::first, 10);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
  CHECK(r.holds);
}

TEST_CASE("remark1: smooth interior inputs hold for the first-order filter") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector s0 = oracle::smooth_interior_input(300, 26, rng);
    const auto r = remark1_bound_check(s0, 2.0, FilterOrder::first, 10);
    CHECK(r.holds);
  }
}

TEST_CASE("rational approximation check stays within the printed bound") {
  const Scalar err = rational_gauss_check();
  CHECK(err < 2.7e-3);
  CHECK(err > 2.5e-3);  // the bound is nearly tight
}

TEST_CASE("predict_time: closed forms and monotonicity") {
  CHECK(predict_time(1, 5, 1000, 1e-9) ==
        doctest::Approx(6.0 * 1000 * 5 * 1e-9).epsilon(1e-15));
  CHECK(predict_time(3, 1, 1000, 1e-9) ==
        doctest::Approx(14.0 * 1000 * 1e-9).epsilon(1e-15));
  CHECK(predict_time(1, 5, 100, 1.0) / predict_time(3, 1, 100, 1.0) ==
        doctest::Approx(30.0 / 14.0).epsilon(1e-15));
  // the first-order filter is cheaper only for one or two iterations
  CHECK(predict_time(1, 1, 100, 1.0) < predict_time(3, 1, 100, 1.0));
  CHECK(predict_time(1, 2, 100, 1.0) < predict_time(3, 1, 100, 1.0));
  CHECK(predict_time(1, 3, 100, 1.0) > predict_time(3, 1, 100, 1.0));
  CHECK(predict_time(1, 1, 100, 0.0) == 0.0);
  // monotone in each argument
  CHECK(predict_time(3, 1, 100, 1.0) > predict_time(1, 1, 100, 1.0));
  CHECK(predict_time(1, 2, 100, 1.0) > predict_time(1, 1, 100, 1.0));
  CHECK(predict_time(1, 1, 200, 1.0) > predict_time(1, 1, 100, 1.0));
  CHECK(predict_time(1, 1, 100, 2.0) > predict_time(1, 1, 100, 1.0));
  const ComplexityModel m{3, 1, 500, 2e-9};
  CHECK(m.predicted_seconds() == predict_time(3, 1, 500, 2e-9));
}

TEST_CASE("measure_filter_time: sampling and validation") {
  const Grid2D g = Grid2D::uniform(64, 64, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  CovarianceOptions o;
  o.threads = 1;
  const HorizontalCovarianceOp op(g, s, o);
  const StateField f = StateField::zeros(g);

  CHECK_THROWS_AS(measure_filter_time(op, f, 0), std::invalid_argument);
  const FilterTiming t = measure_filter_time(op, f, 3);
  CHECK(t.samples.size() == 3);
  CHECK(t.median_seconds > 0.0);
  CHECK(t.coefficient_bytes == op.coefficient_bytes());
  CHECK(t.threads == 1);
}

TEST_CASE("scale quality warnings flag sub-cell kernels") {
  const Grid2D g = Grid2D::uniform(8, 8, 6000.0, 6000.0);
  ScaleField s = uniform_scale(g, 12000.0);
  CHECK(check_scale_quality(s, g).degenerate_points == 0);
  s.rx(2, 2) = 1000.0;  // sigma ~ 0.17
  const auto q = check_scale_quality(s, g);
  CHECK(q.degenerate_points == 1);
  CHECK(q.min_sigma == doctest::Approx(1000.0 / 6000.0).epsilon(1e-12));
}

TEST_CASE("calibrate_t_calc returns a sane per-op time") {
  const Scalar t = calibrate_t_calc(2000000);
  CHECK(t > 0.0);
  CHECK(t < 1e-6);
  CHECK_THROWS_AS(calibrate_t_calc(0), std::invalid_argument);
}
