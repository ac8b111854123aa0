/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "rgf/covariance.hpp"
#include "rgf/rf3.hpp"
#include "oracles.hpp"

using namespace rgf;

namespace {

CovarianceOptions opts(FilterOrder order, int k, bool unit_dc,
                       std::optional<Index> ghost = std::nullopt) {
  CovarianceOptions o;
  o.order = order;
  o.k_iterations = k;
  o.unit_dc = unit_dc;
  o.ghost_width = ghost;
  o.threads = 1;
  return o;
}

MaskField checkered_mask(Index nx, Index ny, unsigned seed, double sea_frac) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MaskField m(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) m(i, j) = u(rng) < sea_frac;
  return m;
}

}  // namespace

TEST_CASE("apply_gx on an all-sea row reduces to the 1D filter") {
  const Grid2D g = Grid2D::uniform(300, 4, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, false));

  StateField f = StateField::zeros(g);
  f.values(150, 2) = 1.0;
  const StateField out = op.apply_gx(f);

  Vector dirac = Vector::Zero(300);
  dirac[150] = 1.0;
  const auto c = rf3_filter_coefficients(ArrayX<Scalar>::Constant(300, 2.0));
  const Vector want = rf3_apply_1d(dirac, c);

  for (Index i = 0; i < 300; ++i)
    CHECK(out.values(i, 2) == doctest::Approx(want[i]).epsilon(1e-14));
  // other rows untouched
  CHECK(out.values.col(0).matrix().norm() == 0.0);
}

TEST_CASE("land splits a row into independent segments") {
  Grid2D g = Grid2D::uniform(21, 4, 6000.0, 6000.0);
  for (Index j = 0; j < g.ny; ++j) g.mask(10, j) = false;
  const ScaleField s = uniform_scale(g, 12000.0);

  for (const auto order : {FilterOrder::first, FilterOrder::third}) {
    const HorizontalCovarianceOp op(g, s, opts(order, order == FilterOrder::first ? 5 : 1, false));
    StateField f = StateField::zeros(g);
    f.values(4, 1) = 1.0;  // left of the land point
    const StateField out = op.apply_gx(f);
    CHECK(out.values(10, 1) == 0.0);  // land stays zero
    for (Index i = 11; i < g.nx; ++i) CHECK(out.values(i, 1) == 0.0);
    CHECK(out.values(4, 1) > 0.0);
  }
}

TEST_CASE("segments shorter than the recursion order pass through unchanged") {
  Grid2D g = Grid2D::uniform(5, 4, 6000.0, 6000.0);
  for (Index j = 0; j < g.ny; ++j) g.mask(2, j) = false;
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, false, 0));

  StateField f = StateField::zeros(g);
  f.values(0, 1) = 2.0;
  f.values(1, 1) = -1.0;
  f.values(3, 1) = 0.5;
  const StateField out = op.apply_gx(f);
  CHECK(out.values(0, 1) == 2.0);
  CHECK(out.values(1, 1) == -1.0);
  CHECK(out.values(2, 1) == 0.0);
  CHECK(out.values(3, 1) == 0.5);
}

TEST_CASE("imaginary sea points change the response only near the coast") {
  // sea run [0, 29] with land to its right; Dirac two cells from the coast
  Grid2D g = Grid2D::uniform(40, 4, 6000.0, 6000.0);
  for (Index i = 30; i < 40; ++i)
    for (Index j = 0; j < g.ny; ++j) g.mask(i, j) = false;
  const ScaleField s = uniform_scale(g, 12000.0);  // sigma = 2

  StateField f = StateField::zeros(g);
  f.values(27, 1) = 1.0;

  const HorizontalCovarianceOp bare(g, s, opts(FilterOrder::third, 1, false, 0));
  const HorizontalCovarianceOp ghosted(g, s, opts(FilterOrder::third, 1, false, 18));
  const Field r0 = bare.apply_gx(f).values;
  const Field r9 = ghosted.apply_gx(f).values;

  const double peak = r9.col(1).maxCoeff();
  const double near_coast = std::abs(r9(29, 1) - r0(29, 1)) / peak;
  CHECK(near_coast > 1e-4);  // truncation is visible at the coast
  for (Index i = 0; i <= 29 - 12; ++i)  // beyond 6 sigma from the coast
    CHECK(std::abs(r9(i, 1) - r0(i, 1)) / peak < 1e-3);
}

TEST_CASE("a full land barrier blocks the composed covariance") {
  Grid2D g = Grid2D::uniform(40, 24, 6000.0, 6000.0);
  for (Index j = 0; j < g.ny; ++j) g.mask(20, j) = false;
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, true));

  StateField f = StateField::zeros(g);
  f.values(8, 12) = 1.0;
  const Field b = op.apply_b(f).values;
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 20; i < g.nx; ++i) CHECK(b(i, j) == 0.0);
  CHECK(b(8, 12) > 0.0);
}

TEST_CASE("separability: 2D impulse response is the outer product") {
  const Grid2D g = Grid2D::uniform(64, 64, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, false));

  // zero in, zero out
  CHECK(op.apply_gy(StateField::zeros(g)).values.matrix().norm() == 0.0);
  CHECK(op.apply_gx(StateField::zeros(g)).values.matrix().norm() == 0.0);

  StateField f = StateField::zeros(g);
  f.values(32, 32) = 1.0;
  const Field out = op.apply_gy(op.apply_gx(f)).values;

  Vector dirac = Vector::Zero(64);
  dirac[32] = 1.0;
  const Vector h = rf3_apply_1d(dirac, rf3_filter_coefficients(
                                           ArrayX<Scalar>::Constant(64, 2.0)));
  for (Index j = 0; j < 64; ++j)
    for (Index i = 0; i < 64; ++i)
      CHECK(out(i, j) == doctest::Approx(h[i] * h[j]).epsilon(1e-10));
}

TEST_CASE("anisotropic scales give an elliptical response") {
  const Grid2D g = Grid2D::uniform(201, 121, 25000.0, 25000.0);
  ScaleField s;
  s.rx = Field::Constant(201, 121, 350000.0);  // sigma_x = 14
  s.ry = Field::Constant(201, 121, 100000.0);  // sigma_y = 4

  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, false));
  StateField f = StateField::zeros(g);
  f.values(100, 60) = 1.0;
  const Field out = op.apply_gy(op.apply_gx(f)).values;

  const auto halfwidth = [](const Vector& v, Index c) {
    const double hm = v[c] / 2.0;
    Index i = c;
    while (v[i] > hm) ++i;
    return double(i - 1 - c) + (v[i - 1] - hm) / (v[i - 1] - v[i]);
  };
  const double wx = halfwidth(out.col(60).matrix(), 100);
  const double wy = halfwidth(out.row(100).transpose().matrix(), 60);
  CHECK(wx / wy == doctest::Approx(3.5).epsilon(0.05));
}

TEST_CASE("dot-product test on a masked grid") {
  Grid2D g = Grid2D::uniform(20, 20, 6000.0, 6000.0);
  g.mask = checkered_mask(20, 20, 99, 0.8);
  const ScaleField s = uniform_scale(g, 12000.0);
  std::mt19937 rng(31);

  for (const auto order : {FilterOrder::first, FilterOrder::third}) {
    const HorizontalCovarianceOp op(
        g, s, opts(order, order == FilterOrder::first ? 5 : 1, true));
    for (int trial = 0; trial < 100; ++trial) {
      const StateField u{&g, oracle::random_field(20, 20, rng)};
      const StateField v{&g, oracle::random_field(20, 20, rng)};
      const double lhs = (v.values * op.apply_v(u).values).sum();
      const double rhs = (op.apply_v_transpose(v).values * u.values).sum();
      const double scale =
          u.values.matrix().norm() * v.values.matrix().norm();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("dense 12x12 assembly: transpose and symmetry are exact") {
  Grid2D g = Grid2D::uniform(12, 12, 6000.0, 6000.0);
  g.mask = checkered_mask(12, 12, 7, 0.85);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, true));

  const Eigen::MatrixXd V = oracle::assemble_dense(
      g, [&](const StateField& f) { return op.apply_v(f); });
  const Eigen::MatrixXd Vt = oracle::assemble_dense(
      g, [&](const StateField& f) { return op.apply_v_transpose(f); });
  CHECK((Vt - V.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::MatrixXd B = oracle::assemble_dense(
      g, [&](const StateField& f) { return op.apply_b(f); });
  CHECK((B - B.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (B + B.transpose()));
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("B is positive semi-definite on random fields") {
  Grid2D g = Grid2D::uniform(16, 16, 6000.0, 6000.0);
  g.mask = checkered_mask(16, 16, 3, 0.9);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, true));
  std::mt19937 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const StateField u{&g, oracle::random_field(16, 16, rng)};
    const double quad = (u.values * op.apply_b(u).values).sum();
    CHECK(quad >= -1e-10 * u.values.matrix().squaredNorm());
  }
}

TEST_CASE("B(dirac): peak location, effective scale, locality") {
  const Grid2D g = Grid2D::uniform(129, 129, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);  // sigma = 2
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, true));

  StateField f = StateField::zeros(g);
  f.values(64, 64) = 1.0;
  const Field b = op.apply_b(f).values;

  Index imax = 0, jmax = 0;
  b.maxCoeff(&imax, &jmax);
  CHECK(imax == 64);
  CHECK(jmax == 64);

  // effective length scale from the half-maximum of the central profile;
  // self-convolution widens the kernel by sqrt(2)
  const auto halfwidth = [&](auto&& line) {
    const double hm = line(64) / 2.0;
    Index i = 64;
    while (line(i) > hm) ++i;
    return double(i - 1 - 64) + (line(i - 1) - hm) / (line(i - 1) - line(i));
  };
  const double scale_x =
      halfwidth([&](Index i) { return b(i, 64); }) / std::sqrt(2.0 * std::log(2.0));
  CHECK(scale_x == doctest::Approx(std::sqrt(2.0) * 2.0).epsilon(0.05));

  // tails: below 3e-4 of the peak beyond 6 sqrt(2) sigma (measured 1.4e-4;
  // the 1e-4 level is reached just past the circle)
  const double peak = b(64, 64);
  const double r0 = 6.0 * std::sqrt(2.0) * 2.0;
  double worst = 0.0;
  for (Index j = 0; j < 129; ++j)
    for (Index i = 0; i < 129; ++i) {
      const double d2 = double((i - 64) * (i - 64) + (j - 64) * (j - 64));
      if (d2 > r0 * r0) worst = std::max(worst, std::abs(b(i, j)) / peak);
    }
  CHECK(worst < 3e-4);
  // and comfortably below 1e-4 from 8 sigma sqrt(2) outward
  const double r1 = 8.0 * std::sqrt(2.0) * 2.0;
  double worst1 = 0.0;
  for (Index j = 0; j < 129; ++j)
    for (Index i = 0; i < 129; ++i) {
      const double d2 = double((i - 64) * (i - 64) + (j - 64) * (j - 64));
      if (d2 > r1 * r1) worst1 = std::max(worst1, std::abs(b(i, j)) / peak);
    }
  CHECK(worst1 < 1e-4);
}

TEST_CASE("V with a zero variance field annihilates everything") {
  const Grid2D g = Grid2D::uniform(16, 16, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  CovarianceOptions o = opts(FilterOrder::third, 1, true);
  o.variance = Field::Zero(16, 16);
  const HorizontalCovarianceOp op(g, s, o);
  std::mt19937 rng(41);
  const StateField u{&g, oracle::random_field(16, 16, rng)};
  CHECK(op.apply_v(u).values.matrix().norm() == 0.0);
  CHECK(op.apply_v_transpose(u).values.matrix().norm() == 0.0);
}

TEST_CASE("V is numerically self-adjoint away from boundaries") {
  const Grid2D g = Grid2D::uniform(120, 120, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);  // sigma = 2
  const HorizontalCovarianceOp op(g, s, opts(FilterOrder::third, 1, true));
  std::mt19937 rng(53);
  StateField u = StateField::zeros(g);
  for (Index j = 40; j < 80; ++j)
    for (Index i = 40; i < 80; ++i)
      u.values(i, j) = std::normal_distribution<double>()(rng);

  const Field vu = op.apply_v(u).values;
  const Field vtu = op.apply_v_transpose(u).values;
  CHECK((vu - vtu).matrix().norm() / vu.matrix().norm() < 1e-6);
}

TEST_CASE("filters keep land points at exactly zero") {
  Grid2D g = Grid2D::uniform(24, 24, 6000.0, 6000.0);
  g.mask = checkered_mask(24, 24, 121, 0.7);
  const ScaleField s = uniform_scale(g, 12000.0);
  std::mt19937 rng(61);

  for (const auto order : {FilterOrder::first, FilterOrder::third}) {
    const HorizontalCovarianceOp op(
        g, s, opts(order, order == FilterOrder::first ? 3 : 1, true));
    // even when the input illegally carries junk on land
    StateField u{&g, oracle::random_field(24, 24, rng)};
    const StateField results[] = {op.apply_gx(u), op.apply_gy(u), op.apply_v(u),
                                  op.apply_v_transpose(u), op.apply_b(u)};
    for (const auto& result : results) {
      for (Index j = 0; j < 24; ++j)
        for (Index i = 0; i < 24; ++i)
          if (!g.mask(i, j)) CHECK(result.values(i, j) == 0.0);
    }
  }
}

TEST_CASE("grid mismatch is rejected") {
  const Grid2D g = Grid2D::uniform(16, 16, 6000.0, 6000.0);
  const Grid2D other = Grid2D::uniform(18, 16, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op(g, s);
  const StateField f = StateField::zeros(other);
  CHECK_THROWS_AS(op.apply_gx(f), std::invalid_argument);
  CHECK_THROWS_AS(op.apply_b(f), std::invalid_argument);
}

TEST_CASE("coefficient storage: third order holds exactly twice the first") {
  const Grid2D g = Grid2D::uniform(32, 20, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  const HorizontalCovarianceOp op1(g, s, opts(FilterOrder::first, 5, true));
  const HorizontalCovarianceOp op3(g, s, opts(FilterOrder::third, 1, true));
  CHECK(op3.coefficient_bytes() == 2 * op1.coefficient_bytes());
  CHECK(op1.coefficient_bytes() == 2 * 2 * sizeof(double) * 32 * 20);
}

TEST_CASE("ghost width resolution: override, grid value, sigma default") {
  Grid2D g = Grid2D::uniform(16, 16, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);  // max sigma 2

  CHECK(HorizontalCovarianceOp(g, s).effective_ghost_width() == 18);
  g.ghost_width = 7;
  CHECK(HorizontalCovarianceOp(g, s).effective_ghost_width() == 7);
  CHECK(HorizontalCovarianceOp(g, s, opts(FilterOrder::third, 1, true, 0))
            .effective_ghost_width() == 0);
  CHECK(HorizontalCovarianceOp(g, s, opts(FilterOrder::third, 1, true, 3))
            .effective_ghost_width() == 3);
}

TEST_CASE("results do not depend on the thread count") {
  Grid2D g = Grid2D::uniform(48, 40, 6000.0, 6000.0);
  g.mask = checkered_mask(48, 40, 5, 0.85);
  const ScaleField s = uniform_scale(g, 12000.0);
  std::mt19937 rng(71);
  const StateField u{&g, oracle::random_field(48, 40, rng)};

  CovarianceOptions o1 = opts(FilterOrder::third, 1, true);
  CovarianceOptions o4 = o1;
  o4.threads = 4;
  const Field a = HorizontalCovarianceOp(g, s, o1).apply_b(u).values;
  const Field b = HorizontalCovarianceOp(g, s, o4).apply_b(u).values;
  CHECK((a == b).all());
}

TEST_CASE("third-order covariance rejects extra iterations") {
  const Grid2D g = Grid2D::uniform(8, 8, 6000.0, 6000.0);
  const ScaleField s = uniform_scale(g, 12000.0);
  CovarianceOptions o = opts(FilterOrder::third, 2, true);
  CHECK_THROWS_AS(HorizontalCovarianceOp(g, s, o), std::invalid_argument);
}
