#include "dyncap/places.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dyncap/errors.hpp"

namespace dyncap {

Place Place::finite(const Integer& p) {
  if (!is_prime(p)) throw InvalidInput("place prime " + p.get_str() + " is not prime");
  Place out;
  out.kind_ = Kind::Finite;
  out.prime_ = p;
  out.log_prime_ = log_abs(p);
  return out;
}

double Place::residue_size() const {
  return is_archimedean() ? std::exp(1.0) : prime_.get_d();
}

std::string Place::label() const { return is_archimedean() ? "arch" : "p:" + prime_.get_str(); }

Place Place::parse(const std::string& text) {
  if (text == "arch" || text == "inf" || text == "infinity") return archimedean();
  std::string digits = text;
  if (digits.rfind("p:", 0) == 0) digits = digits.substr(2);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw InvalidInput("malformed place '" + text + "' (expected arch or p:<prime>)");
  return finite(Integer(digits, 10));
}

bool operator<(const Place& a, const Place& b) {
  if (a.kind_ != b.kind_) return a.is_archimedean();
  return a.prime_ < b.prime_;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = seed % 1000 + 2, c = seed % 97 + 1, m = 64;
  Integer g = 1, r = 1, q = 1, x, ys;
  auto f = [&](const Integer& v) {
    Integer t = v * v + c;
    mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    return t;
  };
  while (g == 1) {
    x = y;
    for (Integer i = 0; i < r; ++i) y = f(y);
    Integer k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (Integer i = 0; i < m && i < r - k; ++i) {
        y = f(y);
        Integer diff = x - y;
        q = q * Integer(abs(diff));
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      g = ::gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = ::gcd(Integer(abs(x - ys)), n);
    } while (g == 1);
  }
  return g;
}

void factor_into(const Integer& n, std::set<Integer>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.insert(n);
    return;
  }
  for (unsigned long seed = 1;; ++seed) {
    const Integer f = pollard_brent(n, seed);
    if (f != n && f != 1) {
      factor_into(f, out);
      factor_into(n / f, out);
      return;
    }
  }
}

}  // namespace

std::vector<Integer> prime_factors(const Integer& n_in) {
  if (n_in == 0) throw InvalidInput("prime_factors of zero");
  Integer n = abs(n_in);
  std::set<Integer> found;
  for (unsigned long p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      found.insert(Integer(p));
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  factor_into(n, found);
  return {found.begin(), found.end()};
}

long valuation(const Integer& p, const Integer& n) {
  if (n == 0) throw InvalidInput("valuation of zero");
  Integer rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long valuation(const Integer& p, const Rational& x) { return valuation(p, x.num()) - valuation(p, x.den()); }

double abs_value(const Place& place, const Rational& x) {
  if (x.is_zero()) return 0.0;
  if (place.is_archimedean()) return std::fabs(x.to_double());
  return std::exp(-static_cast<double>(valuation(place.prime(), x)) * place.log_prime());
}

double log_abs_value(const Place& place, const Rational& x) {
  if (x.is_zero()) throw InvalidInput("log|0|_v is undefined");
  if (place.is_archimedean()) return x.log_abs();
  return -static_cast<double>(valuation(place.prime(), x)) * place.log_prime();
}

std::vector<Integer> support_primes(const Rational& x) {
  if (x.is_zero()) throw InvalidInput("support of zero");
  auto ps = prime_factors(x.num());
  for (auto& q : prime_factors(x.den())) ps.push_back(q);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

double product_formula_check(const Rational& x) {
  if (x.is_zero()) throw InvalidInput("product formula requires a nonzero rational");
  double sum = log_abs_value(Place::archimedean(), x);
  for (const auto& p : support_primes(x)) sum += log_abs_value(Place::finite(p), x);
  return sum;
}

double sup_norm(const Place& place, const Vec2q& z) {
  return std::max(abs_value(place, z[0]), abs_value(place, z[1]));
}

double sup_norm(const Vec2c& z) { return std::max(std::abs(z[0]), std::abs(z[1])); }

long norm_valuation(const Integer& p, const Vec2q& z) {
  if (z[0].is_zero() && z[1].is_zero()) throw DomainError("norm valuation of the origin");
  if (z[0].is_zero()) return valuation(p, z[1]);
  if (z[1].is_zero()) return valuation(p, z[0]);
  return std::min(valuation(p, z[0]), valuation(p, z[1]));
}

double log_sup_norm(const Place& place, const Vec2q& z) {
  if (z[0].is_zero() && z[1].is_zero()) return -HUGE_VAL;
  if (place.is_finite()) return -static_cast<double>(norm_valuation(place.prime(), z)) * place.log_prime();
  if (z[0].is_zero()) return z[1].log_abs();
  if (z[1].is_zero()) return z[0].log_abs();
  return std::max(z[0].log_abs(), z[1].log_abs());
}

double log_sup_norm(const Vec2c& z) { return std::log(sup_norm(z)); }

}  // namespace dyncap
