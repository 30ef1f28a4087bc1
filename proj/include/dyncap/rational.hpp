#pragma once

// Exact arbitrary-precision integers and rationals on top of GMP, plus the
// Eigen glue that lets Rational be used as a dense-matrix scalar.

#include <gmpxx.h>

#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace dyncap {

using Integer = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. A value type with closed arithmetic (no expression templates),
/// so it is safe to store inside Eigen matrices.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}                  // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}                 // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(Integer(std::to_string(v), 10)) {}  // NOLINT
  Rational(const Integer& v) : q_(v) {}       // NOLINT(google-explicit-constructor)
  Rational(const Integer& num, const Integer& den);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Parses "a", "-a/b" or a decimal literal such as "0.25". Throws
  /// InvalidInput on malformed text or a zero denominator.
  static Rational parse(std::string_view text);
  /// The exact dyadic value of a finite double.
  static Rational from_double(double x);

  [[nodiscard]] Integer num() const { return q_.get_num(); }
  [[nodiscard]] Integer den() const { return q_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return q_; }

  [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
  [[nodiscard]] int sign() const { return sgn(q_); }
  [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }

  [[nodiscard]] double to_double() const { return q_.get_d(); }
  /// log|x| without overflow, for numerators/denominators of any size.
  [[nodiscard]] double log_abs() const;
  [[nodiscard]] std::string str() const { return q_.get_str(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

Rational abs(const Rational& x);
/// x^e for any integer e (negative powers require x != 0).
Rational pow(const Rational& x, long e);

/// log|n| for an arbitrary-size nonzero integer.
double log_abs(const Integer& n);
Integer pow(const Integer& base, unsigned long e);

}  // namespace dyncap

namespace Eigen {
template <>
struct NumTraits<dyncap::Rational> : GenericNumTraits<dyncap::Rational> {
  using Real = dyncap::Rational;
  using NonInteger = dyncap::Rational;
  using Nested = dyncap::Rational;
  using Literal = dyncap::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace dyncap {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
using Vec2q = Vec2<Rational>;
using Vec2c = Eigen::Vector2cd;
using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace dyncap
