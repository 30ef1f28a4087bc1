#pragma once

// Dense univariate polynomials with ascending coefficients, templated on the
// scalar. A binary form of degree m, sum c_i x^(m-i) y^i, uses the same
// layout (index i carries y^i), so products of forms are plain convolutions.

#include <algorithm>
#include <complex>
#include <vector>

#include "dyncap/rational.hpp"

namespace dyncap {

template <typename Scalar>
using Poly = std::vector<Scalar>;

using QPoly = Poly<Rational>;
using CPoly = Poly<std::complex<double>>;

namespace detail {
template <typename Scalar>
bool is_zero(const Scalar& s) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return s.is_zero();
  } else {
    return s == Scalar(0);
  }
}
}  // namespace detail

/// Drops exact-zero leading coefficients. The zero polynomial becomes empty.
template <typename Scalar>
Poly<Scalar> trimmed(Poly<Scalar> p) {
  while (!p.empty() && detail::is_zero(p.back())) p.pop_back();
  return p;
}

/// Degree, with -1 for the zero polynomial.
template <typename Scalar>
int degree(const Poly<Scalar>& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (!detail::is_zero(p[static_cast<size_t>(i)])) return i;
  return -1;
}

template <typename Scalar>
Poly<Scalar> operator+(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> r(std::max(a.size(), b.size()), Scalar(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

template <typename Scalar>
Poly<Scalar> operator-(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  Poly<Scalar> r(std::max(a.size(), b.size()), Scalar(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

template <typename Scalar>
Poly<Scalar> operator*(const Poly<Scalar>& a, const Poly<Scalar>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<Scalar> r(a.size() + b.size() - 1, Scalar(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (detail::is_zero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <typename Scalar>
Poly<Scalar> scaled(Poly<Scalar> p, const Scalar& c) {
  for (auto& x : p) x *= c;
  return p;
}

template <typename Scalar>
Poly<Scalar> power(const Poly<Scalar>& p, unsigned e) {
  Poly<Scalar> r{Scalar(1)};
  for (unsigned i = 0; i < e; ++i) r = r * p;
  return r;
}

template <typename Scalar>
Poly<Scalar> derivative(const Poly<Scalar>& p) {
  if (p.size() <= 1) return {};
  Poly<Scalar> r(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Scalar(static_cast<int>(i));
  return r;
}

/// Horner evaluation.
template <typename Scalar, typename Arg>
Arg evaluate(const Poly<Scalar>& p, const Arg& x) {
  Arg acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + Arg(*it);
  return acc;
}

/// Converts exact coefficients to complex doubles.
CPoly to_complex(const QPoly& p);

/// Euclidean division over Q; b must be nonzero.
void divmod(const QPoly& a, const QPoly& b, QPoly& quotient, QPoly& remainder);
/// Monic gcd over Q (empty if both inputs are zero).
QPoly gcd(const QPoly& a, const QPoly& b);
/// p / gcd(p, p'), made primitive over Z.
QPoly squarefree_part(const QPoly& p);
/// Yun's decomposition p = c * prod_k s_k^k with squarefree, pairwise coprime
/// primitive s_k; entry k-1 holds s_k (constant {1} when absent).
std::vector<QPoly> squarefree_decomposition(const QPoly& p);
/// Scales p to an integer polynomial with coprime coefficients and positive
/// leading coefficient.
QPoly primitive_part(const QPoly& p);

/// Exact Lagrange interpolation through (xs[i], ys[i]), xs distinct.
QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

/// Parses an ascending coefficient string array such as ["-2","0","1"].
QPoly parse_coefficients(const std::vector<std::string>& coeffs);

}  // namespace dyncap
