#include "dyncap/globalheights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "dyncap/errors.hpp"
#include "dyncap/parallel.hpp"

namespace dyncap {

namespace {

using ld = long double;
using cld = std::complex<ld>;

ld to_ld(const Rational& x) {
  if (x.is_zero()) return 0;
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, x.num().get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, x.den().get_mpz_t());
  return std::ldexp(static_cast<ld>(mn) / static_cast<ld>(md), static_cast<int>(en - ed));
}

Poly<cld> to_cld(const QPoly& p) {
  Poly<cld> out;
  out.reserve(p.size());
  for (const auto& c : p) out.emplace_back(to_ld(c), 0.0L);
  return out;
}

long coefficient_bits(const QPoly& p) {
  long b = 0;
  for (const auto& c : p) {
    b = std::max<long>(b, static_cast<long>(mpz_sizeinbase(c.num().get_mpz_t(), 2)));
    b = std::max<long>(b, static_cast<long>(mpz_sizeinbase(c.den().get_mpz_t(), 2)));
  }
  return b;
}

// Coprime integral lift with the first nonzero coordinate positive.
Vec2q coprime_lift(const Vec2q& z) {
  if (z[0].is_zero() && z[1].is_zero()) throw DomainError("(0,0) is not a projective point");
  const Integer den = ::lcm(z[0].den(), z[1].den());
  Integer a = z[0].num() * (den / z[0].den()), b = z[1].num() * (den / z[1].den());
  Integer g = ::gcd(a, b);
  if ((a != 0 && a < 0) || (a == 0 && b < 0)) g = -g;
  return {Rational(Integer(a / g)), Rational(Integer(b / g))};
}

// Some root of p lies within n |p/p'| of alpha; bounds the change of
// log+|scale * alpha|.
ld log_plus_error(const Poly<cld>& p, cld alpha, ld scale) {
  const ld r = std::abs(alpha);
  const int n = static_cast<int>(p.size()) - 1;
  cld v = 0, dv = 0;
  if (r <= 1) {
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      dv = dv * alpha + v;
      v = v * alpha + *it;
    }
  } else {
    // p(a)/p'(a) through the reversed polynomial q(y) = y^n p(1/y).
    const cld y = cld(1) / alpha;
    cld q = p[0], dq = 0;
    for (int i = 1; i <= n; ++i) {
      dq = dq * y + q;
      q = q * y + p[static_cast<size_t>(i)];
    }
    if (q == cld(0)) return 0;
    const cld ratio = alpha / (cld(static_cast<ld>(n)) - y * dq / q);
    const ld slack = n * std::abs(ratio) + 8 * std::numeric_limits<ld>::epsilon() * r;
    if ((r + slack) * scale <= 1) return 0;
    return slack >= r ? slack : slack / (r - slack);
  }
  if (dv == cld(0)) return v == cld(0) ? 0 : 1;
  const ld slack = n * std::abs(v / dv) + 8 * std::numeric_limits<ld>::epsilon();
  if ((r + slack) * scale <= 1) return 0;
  return slack >= r ? slack : slack / (r - slack);
}

QPoly reduce_mod(const QPoly& a, const QPoly& m) {
  QPoly q, r;
  divmod(a, m, q, r);
  return r;
}

}  // namespace

AlgebraicPoint::AlgebraicPoint(const QPoly& minpoly) : minpoly_(primitive_part(minpoly)) {
  if (minpoly_.size() < 2) throw InvalidInput("an algebraic point needs a nonconstant polynomial");
  RootOptions opts;
  opts.polish_steps = 6;
  const auto p = to_cld(minpoly_);
  for (const auto& r : polynomial_roots(p, opts)) roots_.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
}

AlgebraicPoint AlgebraicPoint::rational(const Rational& x) { return AlgebraicPoint(QPoly{-x, Rational(1)}); }

double AlgebraicPoint::symmetric_function_error() const {
  Poly<cld> rebuilt{cld(to_ld(minpoly_.back()))};
  for (const auto& r : roots_) rebuilt = rebuilt * Poly<cld>{-cld(r.real(), r.imag()), cld(1)};
  ld scale = 0, err = 0;
  for (size_t i = 0; i < minpoly_.size(); ++i) {
    scale = std::max(scale, std::abs(to_ld(minpoly_[i])));
    err = std::max(err, std::abs(rebuilt[i] - cld(to_ld(minpoly_[i]))));
  }
  return static_cast<double>(err / scale);
}

double weil_height(const Rational& x) {
  const double a = x.is_zero() ? 0.0 : log_abs(x.num());
  return std::max(a, log_abs(x.den()));
}

double weil_height(const Vec2q& z) {
  const Vec2q l = coprime_lift(z);
  const double a = l[0].is_zero() ? -HUGE_VAL : log_abs(l[0].num());
  const double b = l[1].is_zero() ? -HUGE_VAL : log_abs(l[1].num());
  return std::max(a, b);
}

MahlerHeight mahler_height(const QPoly& p_in) {
  const QPoly p = primitive_part(p_in);
  if (p.empty()) throw InvalidInput("height of the zero polynomial");
  MahlerHeight h;
  const int n = static_cast<int>(p.size()) - 1;
  if (n == 0) return h;
  h.finite = log_abs(p.back().num()) / n;
  if (n == 1) {
    // log max(|a0|, |a1|) exactly.
    const double a0 = p[0].is_zero() ? -HUGE_VAL : log_abs(p[0].num());
    h.archimedean = std::max(0.0, a0 - log_abs(p[1].num()));
    h.value = h.archimedean + h.finite;
    return h;
  }
  // Substitute x = 2^s y so the roots have unit geometric mean; the
  // coefficients then stay in long double range and Aberth starts well.
  long s = 0;
  if (!p[0].is_zero()) {
    const double spread = (log_abs(p[0].num()) - log_abs(p.back().num())) / (n * std::log(2.0));
    s = std::lround(spread);
  }
  QPoly balanced = p;
  const Rational two(2);
  for (size_t i = 0; i < balanced.size(); ++i) balanced[i] *= pow(two, s * static_cast<long>(i));
  const auto c = to_cld(balanced);
  RootOptions opts;
  opts.polish_steps = 6;
  const ld log_scale = static_cast<ld>(s) * std::log(2.0L);
  ld sum = 0, err = 0;
  for (const auto& r : polynomial_roots(c, opts)) {
    sum += std::max<ld>(0, std::log(std::abs(r)) + log_scale);
    err += log_plus_error(c, r, std::exp(log_scale));
  }
  h.archimedean = static_cast<double>(sum / n);
  h.root_error = static_cast<double>(err / n) + 4 * std::numeric_limits<double>::epsilon() * (1 + h.archimedean);
  h.value = h.archimedean + h.finite;
  return h;
}

double weil_height(const AlgebraicPoint& z) { return mahler_height(z.minpoly()).value; }

std::vector<Place> effective_places(const HomogeneousPair& F) {
  const ClearedPair c = clear_denominators(F);
  std::set<Integer> primes;
  for (const auto& p : support_primes(c.resultant)) primes.insert(p);
  for (const auto& p : support_primes(c.lambda)) primes.insert(p);
  std::vector<Place> out{Place::archimedean()};
  for (const auto& p : primes) out.push_back(Place::finite(p));
  return out;
}

double height_difference_bound(const HomogeneousPair& F) {
  double b = 0.0;
  for (const auto& v : effective_places(F)) b += place_bounds(F, v).C;
  return b / (F.degree() - 1);
}

GlobalHeightResult canonical_height_rational(const HomogeneousPair& F, const Vec2q& z, double tol) {
  const Vec2q lift = coprime_lift(z);
  const auto places = effective_places(F);
  std::vector<LocalHeightEstimate> parts(places.size());
  HeightOptions opts;
  opts.tol = tol / static_cast<double>(places.size());
  parallel_for(places.size(), [&](std::size_t i) { parts[i] = LocalHeight(F, places[i])(lift, opts); });
  GlobalHeightResult out;
  for (size_t i = 0; i < places.size(); ++i) {
    out.value += parts[i].value;
    out.error_bound += parts[i].total_error();
    out.iterations = std::max(out.iterations, parts[i].iterations);
    out.breakdown.push_back({places[i].label(), parts[i].value});
  }
  return out;
}

QPoly pushforward_polynomial(const HomogeneousPair& F, const QPoly& p_in, int* to_infinity) {
  QPoly p = primitive_part(p_in);
  const int d = F.degree();
  const QPoly f1 = trimmed(F.f1()), f2 = F.f2();
  int lost = 0;
  for (;;) {
    const QPoly g = gcd(p, f1);
    if (degree(g) <= 0) break;
    QPoly q, r;
    divmod(p, g, q, r);
    lost += degree(g);
    p = primitive_part(q);
  }
  if (to_infinity) *to_infinity = lost;
  const int n = degree(p);
  if (n < 1) return QPoly{Rational(1)};
  // q(w) = Res_z(p, w f1 - f2) has degree n; interpolate at w = 0..n.
  std::vector<Rational> xs, ys;
  for (int k = 0; k <= n; ++k) {
    const Rational w(k);
    QPoly b(static_cast<size_t>(d + 1));
    for (size_t i = 0; i < b.size(); ++i) b[i] = w * F.f1()[i] - f2[i];
    xs.push_back(w);
    ys.push_back(form_resultant(p, n, b, d));
  }
  return primitive_part(interpolate(xs, ys));
}

GlobalHeightResult canonical_height_algebraic(const HomogeneousPair& F, const AlgebraicPoint& z,
                                              const AlgebraicHeightOptions& opts) {
  if (opts.n_max < 0) throw InvalidInput("n_max must be nonnegative");
  const double B = height_difference_bound(F);
  const double d = F.degree();
  QPoly q = z.minpoly();
  const double n0 = z.degree();
  long mult = 1;
  double inf_sum = 0.0, inf_err = 0.0;
  std::optional<GlobalHeightResult> h_inf;
  GlobalHeightResult out;
  int k = 0;
  while (k < opts.n_max) {
    if (coefficient_bits(q) > opts.max_coefficient_bits) {
      out.capped = true;
      break;
    }
    int lost = 0;
    QPoly next = pushforward_polynomial(F, q, &lost);
    if (lost > 0) {
      if (!h_inf) h_inf = canonical_height_rational(F, Vec2q(Rational(0), Rational(1)), opts.tol);
      const double scale = static_cast<double>(lost * mult) / std::pow(d, k + 1);
      inf_sum += scale * h_inf->value;
      inf_err += scale * h_inf->error_bound;
    }
    ++k;
    if (degree(next) == 1) {
      // A rational image: finish with the local-height sum.
      // The root -a0/a1 is [a1 : -a0].
      const auto hr = canonical_height_rational(F, Vec2q(next[1], -next[0]), opts.tol);
      const double scale = static_cast<double>(mult) / n0 / std::pow(d, k);
      out.iterations = k;
      out.value = scale * hr.value + inf_sum / n0;
      out.error_bound = scale * hr.error_bound + inf_err / n0;
      out.breakdown.clear();
      for (const auto& c : hr.breakdown) out.breakdown.push_back({c.label, scale * c.value});
      if (inf_sum != 0.0) out.breakdown.push_back({"via-infinity", inf_sum / n0});
      return out;
    }
    if (degree(next) < 1) {
      q = next;
      break;
    }
    // A pure power s^j carries the same average: each root of s stands for
    // j roots of the pushforward.
    const auto parts = squarefree_decomposition(next);
    int nontrivial = 0, which = 0;
    for (size_t j = 0; j < parts.size(); ++j)
      if (degree(parts[j]) > 0) {
        ++nontrivial;
        which = static_cast<int>(j);
      }
    if (nontrivial == 1) {
      mult *= which + 1;
      next = parts[static_cast<size_t>(which)];
    }
    q = std::move(next);
  }
  out.iterations = k;
  const double remaining = degree(q) >= 1 ? static_cast<double>(degree(q) * mult) : 0.0;
  double arch = 0.0, fin = 0.0, rem_err = 0.0;
  if (remaining > 0) {
    const auto mh = mahler_height(q);
    const double w = remaining / n0 / std::pow(d, k);
    arch = w * mh.archimedean;
    fin = w * mh.finite;
    rem_err = w * (B + mh.root_error);
  }
  out.value = arch + fin + inf_sum / n0;
  out.error_bound = rem_err + inf_err / n0;
  out.breakdown = {{"arch", arch}, {"finite", fin}};
  if (inf_sum != 0.0) out.breakdown.push_back({"via-infinity", inf_sum / n0});
  return out;
}

double pairing_identity_residual(const HomogeneousPair& F, const Vec2q& z_in, const Vec2q& w_in, double tol) {
  const Vec2q z = coprime_lift(z_in), w = coprime_lift(w_in);
  const Rational x = z[0] * w[1] - z[1] * w[0];
  if (x.is_zero()) throw DomainError("pairing identity needs distinct points");
  std::vector<Place> places = effective_places(F);
  for (const auto& p : prime_factors(x.num())) {
    const Place v = Place::finite(p);
    if (std::find(places.begin(), places.end(), v) == places.end()) places.push_back(v);
  }
  double g = 0.0;
  for (const auto& v : places) g += Green(F, v)(z, w, tol / static_cast<double>(places.size())).value;
  const auto hz = canonical_height_rational(F, z, tol), hw = canonical_height_rational(F, w, tol);
  return std::fabs(g - hz.value - hw.value);
}

namespace {

// F_i(A, B) mod p for A, B in Q[z]/(p).
QPoly form_mod(const QPoly& form, const QPoly& A, const QPoly& B, const QPoly& p) {
  const int d = static_cast<int>(form.size()) - 1;
  std::vector<QPoly> apow{QPoly{Rational(1)}}, bpow{QPoly{Rational(1)}};
  for (int i = 1; i <= d; ++i) {
    apow.push_back(reduce_mod(apow.back() * A, p));
    bpow.push_back(reduce_mod(bpow.back() * B, p));
  }
  QPoly acc;
  for (int i = 0; i <= d; ++i) {
    if (form[static_cast<size_t>(i)].is_zero()) continue;
    acc = acc + scaled(reduce_mod(apow[static_cast<size_t>(d - i)] * bpow[static_cast<size_t>(i)], p),
                       form[static_cast<size_t>(i)]);
  }
  return trimmed(acc);
}

// log of the p-adic Gauss norm of Norm(A + tB) = prod_i (A(alpha_i) + t B(alpha_i)),
// i.e. sum_i log max(|A(alpha_i)|, |B(alpha_i)|).
double log_gauss_norm(const Place& v, const QPoly& p, const QPoly& A, const QPoly& B) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<Rational> xs, ys;
  for (int k = 0; k <= n; ++k) {
    const Rational t(k);
    QPoly c(static_cast<size_t>(n), Rational(0));
    for (size_t i = 0; i < A.size(); ++i) c[i] += A[i];
    for (size_t i = 0; i < B.size(); ++i) c[i] += t * B[i];
    xs.push_back(t);
    ys.push_back(form_resultant(p, n, c, n - 1));
  }
  const QPoly norm = interpolate(xs, ys);
  long e = std::numeric_limits<long>::max();
  for (const auto& c : norm)
    if (!c.is_zero()) e = std::min(e, valuation(v.prime(), c));
  if (e == std::numeric_limits<long>::max()) throw NumericalFailure("vanishing norm form");
  // Res(p, c) = +-a_N^(n-1) prod c(alpha_i).
  return -static_cast<double>(e) * v.log_prime() - (n - 1) * log_abs_value(v, p.back());
}

struct FiniteSum {
  double value = 0.0;  // sum_i H_{F,v}(1, alpha_i)
  double error = 0.0;
};

FiniteSum conjugate_height_sum(const HomogeneousPair& F, const Place& v, const QPoly& p, double tol, long bit_cap) {
  const LocalHeight H(F, v);
  const int d = F.degree();
  const int n_needed = H.iterations_for(tol);
  const double N = static_cast<double>(p.size() - 1);
  QPoly A{Rational(1)}, B{Rational(0), Rational(1)};
  double offset = 0.0, weight = 1.0;
  FiniteSum s;
  int k = 0;
  for (;; ++k) {
    s.value = offset + weight * log_gauss_norm(v, p, A, B);
    if (k >= n_needed || coefficient_bits(A) + coefficient_bits(B) > bit_cap) break;
    QPoly nA = form_mod(F.f1(), A, B, p), nB = form_mod(F.f2(), A, B, p);
    // Divide out a power of p to keep the content small; it returns as an
    // exact offset.
    long e = std::numeric_limits<long>::max();
    for (const auto* poly : {&nA, &nB})
      for (const auto& c : *poly)
        if (!c.is_zero()) e = std::min(e, valuation(v.prime(), c));
    weight /= d;
    if (e != std::numeric_limits<long>::max() && e != 0) {
      const Rational shift = pow(Rational(v.prime()), -e);
      nA = scaled(nA, shift);
      nB = scaled(nB, shift);
      offset -= weight * N * static_cast<double>(e) * v.log_prime();
    }
    A = std::move(nA);
    B = std::move(nB);
  }
  s.error = N * H.bounds().C / (std::pow(static_cast<double>(d), k) * (d - 1));
  return s;
}

}  // namespace

AdelicEnergy adelic_pair_energy(const HomogeneousPair& F, const AlgebraicPoint& z, double tol,
                                const AlgebraicHeightOptions& hopts) {
  const QPoly& p = z.minpoly();
  const int n = z.degree();
  if (n < 2) throw InvalidInput("adelic pair energy needs at least two conjugates");
  const Rational disc_res = form_resultant(p, n, derivative(p), n - 1);
  if (disc_res.is_zero()) throw DomainError("repeated conjugates");
  const Rational D = disc_res / p.back();
  const double nn = n * (n - 1.0);

  AdelicEnergy out;
  const Green arch(F, Place::archimedean());
  std::vector<Vec2c> pts;
  for (const auto& r : z.roots()) pts.push_back(projective(r));
  const auto e = pair_energy(arch, pts, tol);
  out.archimedean = e.normalized;
  out.breakdown.push_back({"arch", e.normalized});
  // Primes outside S see only the discriminant; their sum follows from the
  // product formula.
  double good = D.log_abs();
  double total = e.pair_sum;
  double err = e.error_bound * nn;

  const auto places = effective_places(F);
  for (const auto& v : places) {
    if (v.is_archimedean()) continue;
    const double log_delta = log_abs_value(v, disc_res) - (2 * n - 1.0) * log_abs_value(v, p.back());
    const auto s = conjugate_height_sum(F, v, p, tol, 4 * hopts.max_coefficient_bits);
    const double part = -log_delta + 2 * (n - 1.0) * s.value + nn * log_green_constant(F, v);
    out.breakdown.push_back({v.label(), part / nn});
    total += part;
    good += log_abs_value(v, D);
    err += 2 * (n - 1.0) * s.error;
  }
  out.breakdown.push_back({"good", good / nn});
  total += good;
  out.g_n = total / nn;
  out.g_error = err / nn + 8 * std::numeric_limits<double>::epsilon() * (1 + std::fabs(out.g_n));
  const auto h = canonical_height_algebraic(F, z, hopts);
  out.two_h = 2 * h.value;
  out.h_error = 2 * h.error_bound;
  return out;
}

const char* to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::Preperiodic: return "preperiodic";
    case OrbitKind::Wandering: return "wandering";
    case OrbitKind::Undetermined: break;
  }
  return "undetermined";
}

OrbitReport classify_orbit(const HomogeneousPair& F, const Vec2q& z, int max_steps) {
  const double B = height_difference_bound(F);
  std::map<std::pair<Integer, Integer>, int> seen;
  Vec2q cur = coprime_lift(z);
  OrbitReport r;
  for (int k = 0; k <= max_steps; ++k) {
    r.steps = k;
    const auto key = std::make_pair(cur[0].num(), cur[1].num());
    if (const auto it = seen.find(key); it != seen.end()) {
      r.kind = OrbitKind::Preperiodic;
      r.tail = it->second;
      r.period = k - it->second;
      return r;
    }
    seen.emplace(key, k);
    // hhat >= h - B > 0 rules out preperiodicity.
    if (weil_height(cur) > B * (1 + 1e-12) + 1e-12) {
      r.kind = OrbitKind::Wandering;
      return r;
    }
    cur = coprime_lift(F(cur));
  }
  return r;
}

}  // namespace dyncap
