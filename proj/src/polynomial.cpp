#include "dyncap/polynomial.hpp"

#include "dyncap/errors.hpp"

namespace dyncap {

CPoly to_complex(const QPoly& p) {
  CPoly out;
  out.reserve(p.size());
  for (const auto& c : p) out.emplace_back(c.to_double(), 0.0);
  return out;
}

void divmod(const QPoly& a, const QPoly& b_in, QPoly& quotient, QPoly& remainder) {
  const QPoly b = trimmed(b_in);
  if (b.empty()) throw InvalidInput("polynomial division by zero");
  remainder = trimmed(a);
  const int db = degree(b);
  quotient.assign(remainder.size() > b.size() - 1 ? remainder.size() - b.size() + 1 : 0, Rational(0));
  const Rational lead = b.back();
  while (degree(remainder) >= db) {
    const int dr = degree(remainder);
    const Rational c = remainder[static_cast<size_t>(dr)] / lead;
    const auto shift = static_cast<size_t>(dr - db);
    quotient[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) remainder[i + shift] -= c * b[i];
    remainder = trimmed(remainder);
  }
  quotient = trimmed(quotient);
}

QPoly gcd(const QPoly& a_in, const QPoly& b_in) {
  QPoly a = trimmed(a_in), b = trimmed(b_in);
  while (!b.empty()) {
    QPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  const Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

QPoly primitive_part(const QPoly& p_in) {
  QPoly p = trimmed(p_in);
  if (p.empty()) return p;
  Integer den = 1, num = 0;
  for (const auto& c : p) {
    den = ::lcm(den, c.den());
  }
  std::vector<Integer> ints;
  ints.reserve(p.size());
  for (const auto& c : p) {
    ints.push_back(c.num() * (den / c.den()));
    num = ::gcd(num, ints.back());
  }
  if (p.back().sign() < 0) num = -num;
  QPoly out;
  out.reserve(p.size());
  for (const auto& n : ints) out.emplace_back(Integer(n / num));
  return out;
}

QPoly squarefree_part(const QPoly& p_in) {
  const QPoly p = trimmed(p_in);
  if (degree(p) <= 0) return primitive_part(p);
  const QPoly g = gcd(p, derivative(p));
  QPoly q, r;
  divmod(p, g, q, r);
  return primitive_part(q);
}

std::vector<QPoly> squarefree_decomposition(const QPoly& p_in) {
  const QPoly p = trimmed(p_in);
  if (p.empty()) throw InvalidInput("squarefree decomposition of the zero polynomial");
  std::vector<QPoly> out;
  if (degree(p) == 0) return out;
  const QPoly a0 = gcd(p, derivative(p));
  QPoly b, c, d, r;
  divmod(p, a0, b, r);
  divmod(derivative(p), a0, c, r);
  d = trimmed(c - derivative(b));
  while (degree(b) > 0) {
    const QPoly a = d.empty() ? b : gcd(b, d);
    out.push_back(primitive_part(a));
    QPoly nb, nc;
    divmod(b, a, nb, r);
    divmod(d, a, nc, r);
    b = std::move(nb);
    d = trimmed(nc - derivative(b));
  }
  return out;
}

QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const size_t n = xs.size();
  QPoly result(n, Rational(0));
  for (size_t i = 0; i < n; ++i) {
    QPoly basis{Rational(1)};
    Rational denom(1);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      basis = basis * QPoly{-xs[j], Rational(1)};
      denom *= xs[i] - xs[j];
    }
    const Rational w = ys[i] / denom;
    for (size_t k = 0; k < basis.size(); ++k) result[k] += w * basis[k];
  }
  return trimmed(result);
}

QPoly parse_coefficients(const std::vector<std::string>& coeffs) {
  QPoly out;
  out.reserve(coeffs.size());
  for (const auto& s : coeffs) out.push_back(Rational::parse(s));
  return out;
}

}  // namespace dyncap
