#pragma once

// Places of Q and the normalized absolute values attached to them.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dyncap/rational.hpp"

namespace dyncap {

/// An absolute value on Q: the archimedean one or the p-adic one for a prime p.
/// Over Q every local degree is 1, so |x|_v is the standard normalized value.
class Place {
 public:
  enum class Kind { Archimedean, Finite };

  static Place archimedean() { return Place(); }
  /// Throws InvalidInput unless p is prime.
  static Place finite(const Integer& p);
  static Place finite(long p) { return finite(Integer(p)); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_archimedean() const { return kind_ == Kind::Archimedean; }
  [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
  /// The prime of a finite place; 0 at the archimedean place.
  [[nodiscard]] const Integer& prime() const { return prime_; }
  /// Order of the residue field: p at a finite place, e archimedeanly.
  [[nodiscard]] double residue_size() const;
  [[nodiscard]] double log_prime() const { return log_prime_; }
  [[nodiscard]] static constexpr int local_degree() { return 1; }

  /// "arch" or "p:5".
  [[nodiscard]] std::string label() const;
  /// Accepts "arch", "inf", "p:5", "5".
  static Place parse(const std::string& text);

  friend bool operator==(const Place& a, const Place& b) {
    return a.kind_ == b.kind_ && a.prime_ == b.prime_;
  }
  /// Archimedean first, then by prime.
  friend bool operator<(const Place& a, const Place& b);

 private:
  Place() = default;
  Kind kind_ = Kind::Archimedean;
  Integer prime_ = 0;
  double log_prime_ = 0.0;
};

bool is_prime(const Integer& n);
/// Distinct prime factors of |n| in increasing order (n != 0).
std::vector<Integer> prime_factors(const Integer& n);

/// v_p(n) for n != 0.
long valuation(const Integer& p, const Integer& n);
/// v_p(x) for x != 0.
long valuation(const Integer& p, const Rational& x);

/// |x|_v; |0|_v = 0.
double abs_value(const Place& place, const Rational& x);
/// log|x|_v for x != 0, computed exactly as -v_p(x) log p at finite places.
double log_abs_value(const Place& place, const Rational& x);

/// Sum of log|x|_v over every place where |x|_v != 1. Zero up to roundoff.
/// Throws InvalidInput for x = 0.
double product_formula_check(const Rational& x);

/// max(|x|_v, |y|_v).
double sup_norm(const Place& place, const Vec2q& z);
double sup_norm(const Vec2c& z);
/// log max(|x|_v, |y|_v); -inf at the origin.
double log_sup_norm(const Place& place, const Vec2q& z);
double log_sup_norm(const Vec2c& z);

/// min(v_p(x), v_p(y)), so that ||z||_p = p^(-e). Requires z != 0.
long norm_valuation(const Integer& p, const Vec2q& z);

/// Primes dividing the numerator or denominator of x (x != 0).
std::vector<Integer> support_primes(const Rational& x);

}  // namespace dyncap
