#pragma once

// Homogeneous lifts F = (F1, F2) of rational maps phi = F2/F1 on P^1 over Q,
// with exact resultants, composition and the per-place constants that bound
// ||F(z)|| against ||z||^d.

#include <complex>
#include <vector>

#include "dyncap/places.hpp"
#include "dyncap/polynomial.hpp"

namespace dyncap {

/// A pair of binary forms of common degree d >= 2 with nonzero resultant.
/// Coefficient i of each form multiplies x^(d-i) y^i, where (x, y) = (z0, z1)
/// and the affine coordinate is z = z1 / z0.
class HomogeneousPair {
 public:
  /// Validates the layout, d >= 2 and Res(F) != 0.
  HomogeneousPair(QPoly f1, QPoly f2);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] const QPoly& f1() const { return f1_; }
  [[nodiscard]] const QPoly& f2() const { return f2_; }
  /// Cached exact resultant; never zero.
  [[nodiscard]] const Rational& resultant() const { return resultant_; }

  template <typename Scalar>
  [[nodiscard]] Vec2<Scalar> operator()(const Vec2<Scalar>& z) const {
    return {evaluate_form(f1_, z), evaluate_form(f2_, z)};
  }

  /// Archimedean evaluation with the coefficients converted to double.
  [[nodiscard]] Vec2c evaluate(const Vec2c& z) const;
  [[nodiscard]] Vec2c operator()(const Vec2c& z) const { return evaluate(z); }

  /// Affine numerator f2(z) and denominator f1(z) of phi.
  [[nodiscard]] QPoly numerator() const { return f2_; }
  [[nodiscard]] QPoly denominator() const { return f1_; }

  friend bool operator==(const HomogeneousPair& a, const HomogeneousPair& b) {
    return a.f1_ == b.f1_ && a.f2_ == b.f2_;
  }

  template <typename Scalar>
  static Scalar evaluate_form(const QPoly& form, const Vec2<Scalar>& z);

 private:
  int degree_ = 0;
  QPoly f1_, f2_;
  std::vector<std::complex<double>> c1_, c2_;
  Rational resultant_;
};

template <typename Scalar>
Scalar HomogeneousPair::evaluate_form(const QPoly& form, const Vec2<Scalar>& z) {
  // Homogeneous Horner: sum_i c_i x^(d-i) y^i.
  const int d = static_cast<int>(form.size()) - 1;
  Scalar acc(0), xpow(1);
  for (int i = d; i >= 0; --i) {
    acc = acc * z[1] + Scalar(form[static_cast<size_t>(i)]) * xpow;
    xpow = xpow * z[0];
  }
  return acc;
}

/// Resultant of binary forms a (degree m) and b (degree n) as the determinant
/// of the (m+n)x(m+n) Sylvester matrix whose rows are x^(n-1-k) y^k a and
/// x^(m-1-k) y^k b in the monomial basis x^(m+n-1), ..., y^(m+n-1).
/// With this layout Res(x^m, y^n) = 1.
Rational form_resultant(const QPoly& a, int m, const QPoly& b, int n);

/// Resultant as defined by form_resultant, without requiring a valid pair.
Rational resultant(const QPoly& f1, const QPoly& f2);
inline Rational resultant(const HomogeneousPair& F) { return F.resultant(); }

/// Exact determinant by fraction-free (Bareiss) elimination after clearing
/// row denominators.
Rational exact_determinant(const RationalMatrix& m);

/// Homogenizes phi = numerator / denominator (ascending coefficients) to the
/// common degree d = max(deg). Throws InvalidInput if the two share a factor
/// or if the reduced degree is below 2.
HomogeneousPair lift_rational_map(const QPoly& numerator, const QPoly& denominator);

/// gamma * F. Throws InvalidInput for gamma = 0.
HomogeneousPair scale(const HomogeneousPair& F, const Rational& gamma);

/// F o G as forms of degree deg(F) * deg(G).
HomogeneousPair compose(const HomogeneousPair& F, const HomogeneousPair& G);

/// F^(n) = F o ... o F (n >= 1).
HomogeneousPair iterate(const HomogeneousPair& F, int n);

/// The primitive integral pair G = lambda * F (integer coefficients,
/// content 1, at least one positive leading term) together with lambda.
struct ClearedPair {
  QPoly g1, g2;
  Rational lambda;
  Rational resultant;  ///< Res(G) = lambda^(2d) Res(F), an integer.
};
ClearedPair clear_denominators(const HomogeneousPair& F);

/// Constants with C_v ||z||^d <= ||F(z)||_v <= D_v ||z||^d in the max norm.
struct PlaceBounds {
  Place place = Place::archimedean();
  double lower = 1.0;  ///< C_v
  double upper = 1.0;  ///< D_v
  double log_lower = 0.0;
  double log_upper = 0.0;
  double r = 1.0;  ///< D_v^(-1/(d-1))
  double R = 1.0;  ///< C_v^(-1/(d-1))
  /// max(log D_v, -log C_v); the local heights converge geometrically with it.
  double C = 0.0;
  /// Finite place where the cleared pair has unit resultant.
  bool good_reduction = false;
  /// Exact (no grid) constants.
  bool exact = false;
};

struct BoundsOptions {
  int grid = 256;      ///< Points per edge of the archimedean grid.
  int max_grid = 4096;
};

PlaceBounds place_bounds(const HomogeneousPair& F, const Place& place, const BoundsOptions& opts = {});

/// Rows x^i y^j F1^k F2^l (i + j = d - 1, k + l = t) written in the monomial
/// basis x^m, x^(m-1) y, ..., y^m with m = t d + d - 1. Ordered by l, then j.
RationalMatrix det_matrix(const HomogeneousPair& F, int t);

}  // namespace dyncap
