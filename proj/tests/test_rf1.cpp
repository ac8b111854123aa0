/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <doctest.h>

#include <cmath>
#include <random>

#include "rgf/rf1.hpp"
#include "oracles.hpp"

using namespace rgf;

TEST_CASE("rf1 coefficients: closed form at sigma=1, K=1") {
  const auto c = rf1_coefficients(1.0, 1);
  CHECK(c.alpha == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
  CHECK(c.beta == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-15));
  CHECK(c.alpha + c.beta == 1.0);  // exact complementarity
}

TEST_CASE("rf1 coefficients: substituting alpha back recovers R^2") {
  for (const double sigma : {0.5, 1.0, 1.7, 2.0, 4.2, 5.0, 10.0, 25.0}) {
    for (const int k : {1, 2, 5, 10}) {
      const auto c = rf1_coefficients(sigma, k);
      CHECK(c.alpha > 0.0);
      CHECK(c.alpha < 1.0);
      CHECK(c.alpha + c.beta == 1.0);
      // R^2 = 2K alpha/(1-alpha)^2 dx^2 with dx=1
      const double r2 = 2.0 * k * c.alpha / ((1.0 - c.alpha) * (1.0 - c.alpha));
      CHECK(r2 == doctest::Approx(sigma * sigma).epsilon(1e-12));
      // beta also satisfies its closed form
      const double q = double(k) / (sigma * sigma);
      CHECK(c.beta == doctest::Approx(std::sqrt(q * (q + 2.0)) - q).epsilon(1e-12));
    }
  }
}

TEST_CASE("rf1 coefficients: wide-scale limit alpha -> 1") {
  const auto c = rf1_coefficients(1e8, 1);
  CHECK(c.alpha < 1.0);
  CHECK(c.alpha > 1.0 - 2e-8);
  CHECK(c.beta < 2e-8);
}

TEST_CASE("rf1 coefficients: invalid arguments") {
  CHECK_THROWS_AS(rf1_coefficients(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rf1_coefficients(-1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rf1_coefficients(1.0, 0), std::invalid_argument);
}

namespace {

Rf1Coefficients uniform_rf1(Index m, double sigma, int k) {
  return rf1_coefficients(ArrayX<Scalar>::Constant(m, sigma), k);
}

}  // namespace

TEST_CASE("rf1 apply: matches the straight-line reference recursion") {
  std::mt19937 rng(7);
  const Index m = 64;
  const Vector u = oracle::random_vector(m, rng);
  for (const int k : {1, 3}) {
    const auto c = uniform_rf1(m, 2.5, k);
    const Vector got = rf1_apply_1d(u, c);
    const Vector want = oracle::rf1_reference(u, c.alpha[0], c.beta[0], k);
    CHECK((got - want).norm() <= 1e-14 * want.norm());
  }
}

TEST_CASE("rf1 apply: zero input stays zero") {
  const auto c = uniform_rf1(32, 2.0, 5);
  CHECK(rf1_apply_1d(Vector::Zero(32).eval(), c).norm() == 0.0);
}

TEST_CASE("rf1 apply: interior response to a constant is the constant") {
  for (const auto& [sigma, k] : {std::pair{2.0, 1}, {2.0, 10}, {5.0, 10}}) {
    const Index m = std::max<Index>(Index(8.0 * sigma * std::sqrt(double(k))) + 1, 16);
    const auto c = uniform_rf1(m, sigma, k);
    const Vector out = rf1_apply_1d(Vector::Constant(m, 3.25).eval(), c);
    CHECK(out[m / 2] == doctest::Approx(3.25).epsilon(0.01));
  }
}

TEST_CASE("rf1 apply: linearity") {
  std::mt19937 rng(11);
  const Index m = 80;
  const auto c = uniform_rf1(m, 3.0, 4);
  const Vector u = oracle::random_vector(m, rng);
  const Vector v = oracle::random_vector(m, rng);
  const Vector lhs = rf1_apply_1d((0.7 * u - 1.3 * v).eval(), c);
  const Vector rhs = 0.7 * rf1_apply_1d(u, c) - 1.3 * rf1_apply_1d(v, c);
  CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("rf1 apply: shift covariance in the interior") {
  const Index m = 200;
  const double sigma = 2.0;
  const auto c = uniform_rf1(m, sigma, 5);
  Vector d1 = Vector::Zero(m), d2 = Vector::Zero(m);
  d1[m / 2] = 1.0;
  d2[m / 2 + 1] = 1.0;
  const Vector r1 = rf1_apply_1d(d1, c);
  const Vector r2 = rf1_apply_1d(d2, c);
  const Index margin = Index(8 * sigma);
  double max_diff = 0;
  for (Index i = margin; i + 1 < m - margin; ++i)
    max_diff = std::max(max_diff, std::abs(r2[i + 1] - r1[i]));
  CHECK(max_diff < 1e-10);
}

TEST_CASE("rf1 apply: impulse error decreases monotonically in K") {
  const Index m = 300;
  const double sigma = 2.0;
  Vector dirac = Vector::Zero(m);
  dirac[m / 2] = 1.0;
  Vector g(m);
  for (Index i = 0; i < m; ++i)
    g[i] = std::exp(-double((i - m / 2) * (i - m / 2)) / (2 * sigma * sigma));
  const Vector gn = g / g.sum();
  double prev = 1e30;
  for (const int k : {1, 5, 10}) {
    const Vector h = rf1_apply_1d(dirac, uniform_rf1(m, sigma, k));
    const double err = (h / h.sum() - gn).norm();
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("rf1 transpose: dot-product identity with varying scales") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> sig_dist(1.0, 4.0);
  const Index m = 70;
  ArrayX<Scalar> sigma(m);
  for (Index i = 0; i < m; ++i) sigma[i] = sig_dist(rng);
  const auto c = rf1_coefficients(sigma, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector u = oracle::random_vector(m, rng);
    const Vector v = oracle::random_vector(m, rng);
    const double lhs = v.dot(rf1_apply_1d(u, c));
    const double rhs = rf1_apply_transpose_1d(v, c).dot(u);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * u.norm() * v.norm());
  }
}

TEST_CASE("rf1 apply: segment too short") {
  const auto c = uniform_rf1(1, 2.0, 1);
  Vector one(1);
  one << 1.0;
  CHECK_THROWS_AS(rf1_apply_1d(one, c), std::invalid_argument);
}
