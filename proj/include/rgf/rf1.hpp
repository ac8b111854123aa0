/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "rgf/types.hpp"

namespace rgf {

namespace detail {

// One causal pass: s[i] <- b[i] s[i] + a[i] s[i-1], startup s[0] <- b[0] s[0].
template <typename S>
void rf1_forward(S* s, const S* a, const S* b, Index m) {
  S prev = b[0] * s[0];
  s[0] = prev;
  for (Index i = 1; i < m; ++i) {
    prev = b[i] * s[i] + a[i] * prev;
    s[i] = prev;
  }
}

template <typename S>
void rf1_backward(S* s, const S* a, const S* b, Index m) {
  S prev = b[m - 1] * s[m - 1];
  s[m - 1] = prev;
  for (Index i = m - 2; i >= 0; --i) {
    prev = b[i] * s[i] + a[i] * prev;
    s[i] = prev;
  }
}

// Exact algebraic transposes of the two passes: each elementary update is
// transposed and the update sequence reversed.
template <typename S>
void rf1_forward_transpose(S* w, const S* a, const S* b, Index m) {
  S prev = w[m - 1];
  w[m - 1] = b[m - 1] * prev;
  for (Index i = m - 2; i >= 0; --i) {
    const S cur = w[i] + a[i + 1] * prev;
    w[i] = b[i] * cur;
    prev = cur;
  }
}

template <typename S>
void rf1_backward_transpose(S* w, const S* a, const S* b, Index m) {
  S prev = w[0];
  w[0] = b[0] * prev;
  for (Index i = 1; i < m; ++i) {
    const S cur = w[i] + a[i - 1] * prev;
    w[i] = b[i] * cur;
    prev = cur;
  }
}

}  // namespace detail

template <typename S>
struct Rf1Scalars {
  S alpha;
  S beta;
};

// First-order coefficients from the quadratic relation
//   R^2 (1-alpha)^2 = 2K alpha dx^2,
// solved for the root in (0,1); q = K dx^2 / R^2 = K / sigma^2.
template <typename S, typename = std::enable_if_t<std::is_arithmetic_v<S>>>
Rf1Scalars<S> rf1_coefficients(S sigma, int k) {
  if (!(sigma > S(0)))
    throw std::invalid_argument("rf1_coefficients: sigma must be positive");
  if (k < 1) throw std::invalid_argument("rf1_coefficients: k must be >= 1");
  const S q = S(k) / (sigma * sigma);
  const S root = std::sqrt(q * (q + S(2)));
  const S alpha = S(1) + q - root;
  return {alpha, S(1) - alpha};  // beta = 1 - alpha exactly
}

template <typename S>
struct Rf1CoefficientsT {
  ArrayX<S> alpha;
  ArrayX<S> beta;
  int k_iterations = 1;
};

using Rf1Coefficients = Rf1CoefficientsT<Scalar>;

template <typename Derived>
Rf1CoefficientsT<typename Derived::Scalar> rf1_coefficients(
    const Eigen::ArrayBase<Derived>& sigma, int k) {
  using S = typename Derived::Scalar;
  Rf1CoefficientsT<S> c;
  c.k_iterations = k;
  c.alpha.resize(sigma.size());
  c.beta.resize(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    const auto ab = rf1_coefficients<S>(sigma[i], k);
    c.alpha[i] = ab.alpha;
    c.beta[i] = ab.beta;
  }
  return c;
}

// K repetitions of {forward, backward} over the segment, in place.
template <typename S>
void rf1_filter_in_place(Eigen::Ref<VectorX<S>> seg,
                         const Rf1CoefficientsT<S>& c) {
  const Index m = seg.size();
  if (m < 2) throw std::invalid_argument("rf1 filter: segment length must be >= 2");
  if (c.alpha.size() != m || c.beta.size() != m)
    throw std::invalid_argument("rf1 filter: coefficient length mismatch");
  for (int k = 0; k < c.k_iterations; ++k) {
    detail::rf1_forward(seg.data(), c.alpha.data(), c.beta.data(), m);
    detail::rf1_backward(seg.data(), c.alpha.data(), c.beta.data(), m);
  }
}

template <typename S>
void rf1_filter_transpose_in_place(Eigen::Ref<VectorX<S>> seg,
                                   const Rf1CoefficientsT<S>& c) {
  const Index m = seg.size();
  if (m < 2) throw std::invalid_argument("rf1 filter: segment length must be >= 2");
  if (c.alpha.size() != m || c.beta.size() != m)
    throw std::invalid_argument("rf1 filter: coefficient length mismatch");
  for (int k = 0; k < c.k_iterations; ++k) {
    detail::rf1_backward_transpose(seg.data(), c.alpha.data(), c.beta.data(), m);
    detail::rf1_forward_transpose(seg.data(), c.alpha.data(), c.beta.data(), m);
  }
}

template <typename Derived>
VectorX<typename Derived::Scalar> rf1_apply_1d(
    const Eigen::MatrixBase<Derived>& segment,
    const Rf1CoefficientsT<typename Derived::Scalar>& c) {
  VectorX<typename Derived::Scalar> out = segment;
  rf1_filter_in_place<typename Derived::Scalar>(out, c);
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> rf1_apply_transpose_1d(
    const Eigen::MatrixBase<Derived>& segment,
    const Rf1CoefficientsT<typename Derived::Scalar>& c) {
  VectorX<typename Derived::Scalar> out = segment;
  rf1_filter_transpose_in_place<typename Derived::Scalar>(out, c);
  return out;
}

}  // namespace rgf
