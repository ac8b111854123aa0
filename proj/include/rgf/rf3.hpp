/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <type_traits>

#include "rgf/types.hpp"

namespace rgf {

// Four-term rational approximation of the standard Gaussian,
//   (1/sqrt(2 pi)) exp(-t^2/2) ~ 1 / (b0 + b2 t^2 + b4 t^4 + b6 t^6),
// accurate to 2.7e-3 in absolute value. The third-order filter is the
// discretization of the forward/backward factorization of this rational.
struct RationalGaussConstants {
  static constexpr double b0 = 2.490895;
  static constexpr double b2 = 1.466003;
  static constexpr double b4 = -0.024393;
  static constexpr double b6 = 0.178257;
};

template <typename S>
S rational_gauss(S t) {
  const S t2 = t * t;
  return S(1) / (S(RationalGaussConstants::b0) +
                 S(RationalGaussConstants::b2) * t2 +
                 S(RationalGaussConstants::b4) * t2 * t2 +
                 S(RationalGaussConstants::b6) * t2 * t2 * t2);
}

// Cubic-polynomial constants of the third-order denominator
//   a0 = c00 + c01 x + c02 x^2 + x^3
//   a1 = c11 x + c12 x^2 + c13 x^3
//   a2 = -c02 x^2 - c13 x^3        (printed table; see below for the variant)
//   a3 = x^3
// Two slightly different printings of these constants circulate; the build
// option RGF_USE_APPENDIX_A_CONSTANTS selects the alternate set for A/B runs.
namespace rf3_constants {
#ifdef RGF_USE_APPENDIX_A_CONSTANTS
inline constexpr double c00 = 3.738128;
inline constexpr double c01 = 5.788982;
inline constexpr double c02 = 3.382472;
inline constexpr double c11 = 5.788824;
inline constexpr double c12 = 6.764946;
inline constexpr double c13 = 2.999999;
inline constexpr double c22 = -3.382472;
inline constexpr double c23 = -2.999999;
#else
inline constexpr double c00 = 3.738128;
inline constexpr double c01 = 5.788982;
inline constexpr double c02 = 3.382473;
inline constexpr double c11 = 5.788982;
inline constexpr double c12 = 6.764946;
inline constexpr double c13 = 3.0;
inline constexpr double c22 = -3.382473;
inline constexpr double c23 = -3.0;
#endif
}  // namespace rf3_constants

// Literal coefficient set: denominator polynomials a0..a3 evaluated at the
// given argument, feedback ratios alpha_j = a_j/a0, and the normalized
// amplitude beta = (2 pi sigma^2)^(1/4) (1 - (alpha1+alpha2+alpha3)).
template <typename S>
struct Rf3PolynomialSet {
  S a0, a1, a2, a3;
  S alpha1, alpha2, alpha3;
  S beta;
};

template <typename S, typename = std::enable_if_t<std::is_arithmetic_v<S>>>
Rf3PolynomialSet<S> rf3_coefficients(S sigma) {
  using namespace rf3_constants;
  if (!(sigma > S(0)))
    throw std::invalid_argument("rf3_coefficients: sigma must be positive");
  const S x = sigma, x2 = x * x, x3 = x2 * x;
  Rf3PolynomialSet<S> t;
  t.a0 = S(c00) + S(c01) * x + S(c02) * x2 + x3;
  t.a1 = S(c11) * x + S(c12) * x2 + S(c13) * x3;
  t.a2 = S(c22) * x2 + S(c23) * x3;
  t.a3 = x3;
  t.alpha1 = t.a1 / t.a0;
  t.alpha2 = t.a2 / t.a0;
  t.alpha3 = t.a3 / t.a0;
  t.beta = std::pow(S(2) * std::numbers::pi_v<S> * sigma * sigma, S(0.25)) *
           (S(1) - (t.alpha1 + t.alpha2 + t.alpha3));
  return t;
}

// Variance of the discrete forward+backward cascade whose feedback ratios are
// evaluated at argument q: twice the variance of the causal kernel
// beta / (1 - alpha1 z^-1 - alpha2 z^-2 - alpha3 z^-3), in closed form from
// the generating function.
template <typename S>
S rf3_cascade_variance(S q) {
  const auto t = rf3_coefficients(q);
  const S a = S(1) - (t.alpha1 + t.alpha2 + t.alpha3);
  const S s1 = t.alpha1 + S(2) * t.alpha2 + S(3) * t.alpha3;
  const S s2 = S(2) * t.alpha2 + S(6) * t.alpha3;
  return S(2) * (s1 * s1 / (a * a) + (s1 + s2) / a);
}

namespace detail {

// Young & van Vliet (1995) fitted warping of the target length scale into the
// polynomial argument, compensating the backward/forward-difference
// discretization bias. Floored away from zero so degenerate sub-cell scales
// keep finite coefficients.
template <typename S>
S yvv95_argument(S sigma) {
  S q;
  if (sigma >= S(2.5)) {
    q = S(0.98711) * sigma - S(0.96330);
  } else {
    const S arg = std::max(S(1) - S(0.26891) * sigma, S(0));
    q = S(3.97156) - S(4.14554) * std::sqrt(arg);
  }
  return std::max(q, S(0.01));
}

template <typename S>
S variance_matched_argument(S sigma) {
  const S target = sigma * sigma;
  S lo = S(1e-12);
  S hi = std::max(sigma, S(1));
  while (rf3_cascade_variance(hi) < target) hi *= S(2);
  for (int it = 0; it < 200; ++it) {
    const S mid = S(0.5) * (lo + hi);
    (rf3_cascade_variance(mid) < target ? lo : hi) = mid;
  }
  return S(0.5) * (lo + hi);
}

}  // namespace detail

template <typename S>
S rf3_length_scale_argument(S sigma, Rf3Calibration calibration) {
  switch (calibration) {
    case Rf3Calibration::yvv95:
      return detail::yvv95_argument(sigma);
    case Rf3Calibration::variance_match:
      return detail::variance_matched_argument(sigma);
    case Rf3Calibration::none:
      return sigma;
  }
  return sigma;
}

// Coefficients actually used to filter at length scale sigma: feedback ratios
// evaluated at the calibrated argument q, amplitude carrying the target
// sigma so the cascade DC gain is exactly sqrt(2 pi) sigma.
template <typename S>
struct Rf3Scalars {
  S alpha1, alpha2, alpha3;
  S beta;
  S q;
};

template <typename S>
Rf3Scalars<S> rf3_filter_scalars(S sigma,
                                 Rf3Calibration calibration = Rf3Calibration::yvv95) {
  if (!(sigma > S(0)))
    throw std::invalid_argument("rf3_filter_scalars: sigma must be positive");
  const S q = rf3_length_scale_argument(sigma, calibration);
  const auto t = rf3_coefficients(q);
  Rf3Scalars<S> f;
  f.alpha1 = t.alpha1;
  f.alpha2 = t.alpha2;
  f.alpha3 = t.alpha3;
  f.beta = std::pow(S(2) * std::numbers::pi_v<S> * sigma * sigma, S(0.25)) *
           (S(1) - (t.alpha1 + t.alpha2 + t.alpha3));
  f.q = q;
  return f;
}

template <typename S>
struct Rf3CoefficientsT {
  ArrayX<S> alpha1, alpha2, alpha3;
  ArrayX<S> beta;
};

using Rf3Coefficients = Rf3CoefficientsT<Scalar>;

template <typename Derived>
Rf3CoefficientsT<typename Derived::Scalar> rf3_filter_coefficients(
    const Eigen::ArrayBase<Derived>& sigma,
    Rf3Calibration calibration = Rf3Calibration::yvv95) {
  using S = typename Derived::Scalar;
  Rf3CoefficientsT<S> c;
  const Index m = sigma.size();
  c.alpha1.resize(m);
  c.alpha2.resize(m);
  c.alpha3.resize(m);
  c.beta.resize(m);
  for (Index i = 0; i < m; ++i) {
    const auto f = rf3_filter_scalars(sigma[i], calibration);
    c.alpha1[i] = f.alpha1;
    c.alpha2[i] = f.alpha2;
    c.alpha3[i] = f.alpha3;
    c.beta[i] = f.beta;
  }
  return c;
}

namespace detail {

// Forward pass with the heuristic startup rows
//   p1 = b1 s1, p2 = b2 s2 + a1 p1, p3 = b3 s3 + a1 p2 + a2 p1
// realized by dropping taps that would reach before the segment.
template <typename S>
void rf3_forward(S* s, const S* a1, const S* a2, const S* a3, const S* b,
                 Index m) {
  // pm1/pm2/pm3 hold the last three outputs
  S pm1 = b[0] * s[0];
  s[0] = pm1;
  S t = b[1] * s[1] + a1[1] * pm1;
  s[1] = t;
  S pm2 = pm1;
  pm1 = t;
  t = b[2] * s[2] + a1[2] * pm1 + a2[2] * pm2;
  s[2] = t;
  S pm3 = pm2;
  pm2 = pm1;
  pm1 = t;
  for (Index i = 3; i < m; ++i) {
    t = b[i] * s[i] + a1[i] * pm1 + a2[i] * pm2 + a3[i] * pm3;
    pm3 = pm2;
    pm2 = pm1;
    pm1 = t;
    s[i] = t;
  }
}

template <typename S>
void rf3_backward(S* s, const S* a1, const S* a2, const S* a3, const S* b,
                  Index m) {
  S pm1 = b[m - 1] * s[m - 1];
  s[m - 1] = pm1;
  S t = b[m - 2] * s[m - 2] + a1[m - 2] * pm1;
  s[m - 2] = t;
  S pm2 = pm1;
  pm1 = t;
  t = b[m - 3] * s[m - 3] + a1[m - 3] * pm1 + a2[m - 3] * pm2;
  s[m - 3] = t;
  S pm3 = pm2;
  pm2 = pm1;
  pm1 = t;
  for (Index i = m - 4; i >= 0; --i) {
    t = b[i] * s[i] + a1[i] * pm1 + a2[i] * pm2 + a3[i] * pm3;
    pm3 = pm2;
    pm2 = pm1;
    pm1 = t;
    s[i] = t;
  }
}

template <typename S>
void rf3_forward_transpose(S* w, const S* a1, const S* a2, const S* a3,
                           const S* b, Index m) {
  for (Index i = m - 1; i >= 0; --i) {
    const S wi = w[i];
    if (i >= 1) w[i - 1] += a1[i] * wi;
    if (i >= 2) w[i - 2] += a2[i] * wi;
    if (i >= 3) w[i - 3] += a3[i] * wi;
    w[i] = b[i] * wi;
  }
}

template <typename S>
void rf3_backward_transpose(S* w, const S* a1, const S* a2, const S* a3,
                            const S* b, Index m) {
  for (Index i = 0; i < m; ++i) {
    const S wi = w[i];
    if (i + 1 < m) w[i + 1] += a1[i] * wi;
    if (i + 2 < m) w[i + 2] += a2[i] * wi;
    if (i + 3 < m) w[i + 3] += a3[i] * wi;
    w[i] = b[i] * wi;
  }
}

}  // namespace detail

// Single forward+backward cascade (the third-order filter is one-pass by
// construction), in place.
template <typename S>
void rf3_filter_in_place(Eigen::Ref<VectorX<S>> seg,
                         const Rf3CoefficientsT<S>& c) {
  const Index m = seg.size();
  if (m < 4) throw std::invalid_argument("rf3 filter: segment length must be >= 4");
  if (c.alpha1.size() != m || c.beta.size() != m)
    throw std::invalid_argument("rf3 filter: coefficient length mismatch");
  detail::rf3_forward(seg.data(), c.alpha1.data(), c.alpha2.data(),
                      c.alpha3.data(), c.beta.data(), m);
  detail::rf3_backward(seg.data(), c.alpha1.data(), c.alpha2.data(),
                       c.alpha3.data(), c.beta.data(), m);
}

template <typename S>
void rf3_filter_transpose_in_place(Eigen::Ref<VectorX<S>> seg,
                                   const Rf3CoefficientsT<S>& c) {
  const Index m = seg.size();
  if (m < 4) throw std::invalid_argument("rf3 filter: segment length must be >= 4");
  if (c.alpha1.size() != m || c.beta.size() != m)
    throw std::invalid_argument("rf3 filter: coefficient length mismatch");
  detail::rf3_backward_transpose(seg.data(), c.alpha1.data(), c.alpha2.data(),
                                 c.alpha3.data(), c.beta.data(), m);
  detail::rf3_forward_transpose(seg.data(), c.alpha1.data(), c.alpha2.data(),
                                c.alpha3.data(), c.beta.data(), m);
}

template <typename Derived>
VectorX<typename Derived::Scalar> rf3_apply_1d(
    const Eigen::MatrixBase<Derived>& segment,
    const Rf3CoefficientsT<typename Derived::Scalar>& c) {
  VectorX<typename Derived::Scalar> out = segment;
  rf3_filter_in_place<typename Derived::Scalar>(out, c);
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> rf3_apply_transpose_1d(
    const Eigen::MatrixBase<Derived>& segment,
    const Rf3CoefficientsT<typename Derived::Scalar>& c) {
  VectorX<typename Derived::Scalar> out = segment;
  rf3_filter_transpose_in_place<typename Derived::Scalar>(out, c);
  return out;
}

}  // namespace rgf
