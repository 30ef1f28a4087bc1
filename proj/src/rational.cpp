#include "dyncap/rational.hpp"

#include <cctype>
#include <cmath>

#include "dyncap/errors.hpp"

namespace dyncap {

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw InvalidInput("division by zero rational");
  q_ /= o.q_;
  return *this;
}

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw InvalidInput("non-finite value has no rational form");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

Rational Rational::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  // Accept the unicode minus sign U+2212 as well as ASCII '-'.
  if (s.rfind("\xE2\x88\x92", 0) == 0) s = "-" + s.substr(3);
  bool negative = false;
  std::string_view body = s;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    negative = body[0] == '-';
    body.remove_prefix(1);
  }
  Rational out;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto n = body.substr(0, slash), d = body.substr(slash + 1);
    if (!is_digits(n) || !is_digits(d)) throw InvalidInput("malformed rational '" + std::string(text) + "'");
    out = Rational(Integer(std::string(n), 10), Integer(std::string(d), 10));
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !is_digits(ip)) || (!fp.empty() && !is_digits(fp)))
      throw InvalidInput("malformed decimal '" + std::string(text) + "'");
    const std::string digits = std::string(ip) + std::string(fp);
    out = Rational(Integer(digits.empty() ? "0" : digits, 10), pow(Integer(10), fp.size()));
  } else {
    if (!is_digits(body)) throw InvalidInput("malformed rational '" + std::string(text) + "'");
    out = Rational(Integer(std::string(body), 10));
  }
  return negative ? -out : out;
}

double log_abs(const Integer& n) {
  if (n == 0) return -HUGE_VAL;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double Rational::log_abs() const { return dyncap::log_abs(num()) - dyncap::log_abs(den()); }

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& x, long e) {
  if (e < 0) return Rational(1) / pow(x, -e);
  Integer n, d;
  const Integer xn = x.num(), xd = x.den();
  mpz_pow_ui(n.get_mpz_t(), xn.get_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), xd.get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

Integer pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

}  // namespace dyncap
