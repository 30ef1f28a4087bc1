#include "dyncap/homforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dyncap/errors.hpp"

namespace dyncap {

HomogeneousPair::HomogeneousPair(QPoly f1, QPoly f2) : f1_(std::move(f1)), f2_(std::move(f2)) {
  if (f1_.size() != f2_.size() || f1_.size() < 2)
    throw InvalidInput("homogeneous pair needs two coefficient arrays of equal length d+1");
  degree_ = static_cast<int>(f1_.size()) - 1;
  if (degree_ < 2) throw InvalidInput("unsupported degree " + std::to_string(degree_) + " (need d >= 2)");
  resultant_ = form_resultant(f1_, degree_, f2_, degree_);
  if (resultant_.is_zero()) throw InvalidInput("F1 and F2 share a common factor (zero resultant)");
  c1_ = to_complex(f1_);
  c2_ = to_complex(f2_);
}

Vec2c HomogeneousPair::evaluate(const Vec2c& z) const {
  auto eval = [&](const std::vector<std::complex<double>>& c) {
    std::complex<double> acc(0), xpow(1);
    for (int i = degree_; i >= 0; --i) {
      acc = acc * z[1] + c[static_cast<size_t>(i)] * xpow;
      xpow *= z[0];
    }
    return acc;
  };
  return {eval(c1_), eval(c2_)};
}

Rational exact_determinant(const RationalMatrix& m_in) {
  const auto n = m_in.rows();
  if (n != m_in.cols()) throw InvalidInput("determinant of a non-square matrix");
  if (n == 0) return Rational(1);
  // Clear each row to integers and remember the scale.
  std::vector<std::vector<Integer>> a(static_cast<size_t>(n), std::vector<Integer>(static_cast<size_t>(n)));
  Integer scale = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    Integer den = 1;
    for (Eigen::Index j = 0; j < n; ++j) den = ::lcm(den, m_in(i, j).den());
    for (Eigen::Index j = 0; j < n; ++j)
      a[static_cast<size_t>(i)][static_cast<size_t>(j)] = m_in(i, j).num() * (den / m_in(i, j).den());
    scale *= den;
  }
  // Bareiss: every division below is exact.
  int sign = 1;
  Integer prev = 1;
  const auto N = static_cast<size_t>(n);
  for (size_t k = 0; k + 1 < N; ++k) {
    if (a[k][k] == 0) {
      size_t swap = k + 1;
      while (swap < N && a[swap][k] == 0) ++swap;
      if (swap == N) return Rational(0);
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < N; ++i) {
      for (size_t j = k + 1; j < N; ++j) {
        Integer t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = std::move(t);
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  Integer det = a[N - 1][N - 1];
  if (sign < 0) det = -det;
  return Rational(det, scale);
}

Rational form_resultant(const QPoly& a, int m, const QPoly& b, int n) {
  if (m < 0 || n < 0) throw InvalidInput("negative form degree");
  const int size = m + n;
  if (size == 0) return Rational(1);
  RationalMatrix s = RationalMatrix::Constant(size, size, Rational(0));
  auto coeff = [](const QPoly& p, int i) { return i < static_cast<int>(p.size()) ? p[static_cast<size_t>(i)] : Rational(0); };
  for (int k = 0; k < n; ++k)
    for (int i = 0; i <= m; ++i) s(k, k + i) = coeff(a, i);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i <= n; ++i) s(n + k, k + i) = coeff(b, i);
  return exact_determinant(s);
}

Rational resultant(const QPoly& f1, const QPoly& f2) {
  const int d = static_cast<int>(std::max(f1.size(), f2.size())) - 1;
  return form_resultant(f1, d, f2, d);
}

HomogeneousPair lift_rational_map(const QPoly& numerator, const QPoly& denominator) {
  const QPoly f2 = trimmed(numerator), f1 = trimmed(denominator);
  if (f1.empty()) throw InvalidInput("denominator of the rational map is zero");
  if (f2.empty()) throw InvalidInput("numerator of the rational map is zero");
  const QPoly g = gcd(f1, f2);
  if (degree(g) > 0) {
    QPoly r1, r2, rem;
    divmod(f1, g, r1, rem);
    divmod(f2, g, r2, rem);
    const int reduced = std::max(degree(r1), degree(r2));
    if (reduced < 2)
      throw InvalidInput("unsupported degree: map reduces to degree " + std::to_string(reduced) +
                         " after removing a common factor");
    throw InvalidInput("numerator and denominator share a common factor");
  }
  const int d = std::max(degree(f1), degree(f2));
  if (d < 2) throw InvalidInput("unsupported degree " + std::to_string(d) + " (need d >= 2)");
  QPoly F1 = f1, F2 = f2;
  F1.resize(static_cast<size_t>(d + 1), Rational(0));
  F2.resize(static_cast<size_t>(d + 1), Rational(0));
  return {std::move(F1), std::move(F2)};
}

HomogeneousPair scale(const HomogeneousPair& F, const Rational& gamma) {
  if (gamma.is_zero()) throw InvalidInput("scale factor must be nonzero");
  return {scaled(F.f1(), gamma), scaled(F.f2(), gamma)};
}

HomogeneousPair compose(const HomogeneousPair& F, const HomogeneousPair& G) {
  const int d = F.degree();
  std::vector<QPoly> p1(static_cast<size_t>(d + 1)), p2(static_cast<size_t>(d + 1));
  p1[0] = p2[0] = QPoly{Rational(1)};
  for (int i = 1; i <= d; ++i) {
    p1[static_cast<size_t>(i)] = p1[static_cast<size_t>(i - 1)] * G.f1();
    p2[static_cast<size_t>(i)] = p2[static_cast<size_t>(i - 1)] * G.f2();
  }
  const auto out_size = static_cast<size_t>(d * G.degree() + 1);
  auto substitute = [&](const QPoly& form) {
    QPoly acc(out_size, Rational(0));
    for (int i = 0; i <= d; ++i) {
      const Rational& c = form[static_cast<size_t>(i)];
      if (c.is_zero()) continue;
      const QPoly term = p1[static_cast<size_t>(d - i)] * p2[static_cast<size_t>(i)];
      for (size_t k = 0; k < term.size(); ++k) acc[k] += c * term[k];
    }
    return acc;
  };
  return {substitute(F.f1()), substitute(F.f2())};
}

HomogeneousPair iterate(const HomogeneousPair& F, int n) {
  if (n < 1) throw InvalidInput("iterate requires n >= 1");
  HomogeneousPair out = F;
  for (int i = 1; i < n; ++i) out = compose(F, out);
  return out;
}

ClearedPair clear_denominators(const HomogeneousPair& F) {
  Integer den = 1, content = 0;
  for (const auto* form : {&F.f1(), &F.f2()})
    for (const auto& c : *form) den = ::lcm(den, c.den());
  for (const auto* form : {&F.f1(), &F.f2()})
    for (const auto& c : *form) content = ::gcd(content, Integer(c.num() * (den / c.den())));
  ClearedPair out;
  out.lambda = Rational(den, content);
  // Sign normalization: make the first nonzero coefficient of G1 positive.
  for (const auto& c : F.f1())
    if (!c.is_zero()) {
      if (c.sign() < 0) out.lambda = -out.lambda;
      break;
    }
  out.g1 = scaled(F.f1(), out.lambda);
  out.g2 = scaled(F.f2(), out.lambda);
  out.resultant = F.resultant() * pow(out.lambda, 2L * F.degree());
  return out;
}

namespace {

PlaceBounds finish(PlaceBounds b, int d) {
  b.log_lower = std::log(b.lower);
  b.log_upper = std::log(b.upper);
  b.r = std::exp(-b.log_upper / (d - 1));
  b.R = std::exp(-b.log_lower / (d - 1));
  b.C = std::max(b.log_upper, -b.log_lower);
  return b;
}

// A diagonal pair (a x^d, b y^d) or its swap satisfies ||F(z)|| = max(|a|,|b|)
// and min(|a|,|b|) at the extreme points of the unit sphere, exactly.
bool diagonal_extremes(const HomogeneousPair& F, double& lo, double& hi) {
  const int d = F.degree();
  auto monomial_index = [](const QPoly& p) {
    int idx = -1;
    for (size_t i = 0; i < p.size(); ++i)
      if (!p[i].is_zero()) {
        if (idx >= 0) return -2;
        idx = static_cast<int>(i);
      }
    return idx;
  };
  const int i1 = monomial_index(F.f1()), i2 = monomial_index(F.f2());
  if (!((i1 == 0 && i2 == d) || (i1 == d && i2 == 0))) return false;
  const double a = std::fabs(F.f1()[static_cast<size_t>(i1)].to_double());
  const double b = std::fabs(F.f2()[static_cast<size_t>(i2)].to_double());
  lo = std::min(a, b);
  hi = std::max(a, b);
  return true;
}

struct GridResult {
  double min_value, max_value, margin;
};

// Scans u over a square grid covering the closed unit disk for the two charts
// (1, u) and (u, 1) of the max-norm unit sphere. The margin bounds how far
// ||F|| can move between a sphere point and its nearest grid node.
GridResult scan_sphere(const HomogeneousPair& F, int n) {
  const int d = F.degree();
  const double h = 2.0 / (n - 1);
  const double delta = h / std::sqrt(2.0);
  auto lipschitz = [&](bool y_chart) {
    double L = 0.0;
    for (const auto* form : {&F.f1(), &F.f2()}) {
      double s = 0.0;
      for (int i = 0; i <= d; ++i) {
        const int e = y_chart ? i : d - i;
        if (e == 0) continue;
        s += e * std::fabs((*form)[static_cast<size_t>(i)].to_double()) * std::pow(1.0 + h, e - 1);
      }
      L = std::max(L, s);
    }
    return L;
  };
  GridResult out{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  const double margin = std::max(lipschitz(true), lipschitz(false)) * delta;
  for (int chart = 0; chart < 2; ++chart) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const std::complex<double> u(-1.0 + a * h, -1.0 + b * h);
        if (std::abs(u) > 1.0 + h) continue;
        const Vec2c z = chart == 0 ? Vec2c(1.0, u) : Vec2c(u, 1.0);
        const double v = sup_norm(F.evaluate(z));
        out.min_value = std::min(out.min_value, v);
        out.max_value = std::max(out.max_value, v);
      }
    }
  }
  out.margin = margin;
  return out;
}

}  // namespace

PlaceBounds place_bounds(const HomogeneousPair& F, const Place& place, const BoundsOptions& opts) {
  PlaceBounds b;
  b.place = place;
  const int d = F.degree();
  if (place.is_finite()) {
    const ClearedPair g = clear_denominators(F);
    const Integer& p = place.prime();
    // G = lambda F is integral with unit content: C(G) = |Res G|_p, D(G) = 1.
    const double log_abs_lambda = log_abs_value(place, g.lambda);
    const double log_abs_res = log_abs_value(place, g.resultant);
    b.log_upper = -log_abs_lambda;
    b.log_lower = -log_abs_lambda + log_abs_res;
    b.upper = std::exp(b.log_upper);
    b.lower = std::exp(b.log_lower);
    b.r = std::exp(-b.log_upper / (d - 1));
    b.R = std::exp(-b.log_lower / (d - 1));
    b.C = std::max(b.log_upper, -b.log_lower);
    b.good_reduction = valuation(p, g.resultant) == 0;
    b.exact = true;
    return b;
  }
  double lo = 0, hi = 0;
  if (diagonal_extremes(F, lo, hi)) {
    b.lower = lo;
    b.upper = hi;
    b.exact = true;
    return finish(b, d);
  }
  double coeff_bound = 0.0;
  for (const auto* form : {&F.f1(), &F.f2()}) {
    double s = 0.0;
    for (const auto& c : *form) s += std::fabs(c.to_double());
    coeff_bound = std::max(coeff_bound, s);
  }
  for (int n = std::max(opts.grid, 8);; n *= 2) {
    const GridResult g = scan_sphere(F, n);
    const double lower = g.min_value - g.margin;
    if (lower > 0.0) {
      b.lower = lower;
      b.upper = std::min(coeff_bound, g.max_value + g.margin);
      return finish(b, d);
    }
    if (n * 2 > opts.max_grid)
      throw NumericalFailure("could not certify a positive lower bound C_v on the unit sphere (grid " +
                             std::to_string(n) + ")");
  }
}

RationalMatrix det_matrix(const HomogeneousPair& F, int t) {
  if (t < 1) throw InvalidInput("det_matrix requires t >= 1");
  const int d = F.degree();
  const int size = (t + 1) * d;
  RationalMatrix out = RationalMatrix::Constant(size, size, Rational(0));
  int row = 0;
  for (int l = 0; l <= t; ++l) {
    const QPoly base = power(F.f1(), static_cast<unsigned>(t - l)) * power(F.f2(), static_cast<unsigned>(l));
    for (int j = 0; j < d; ++j, ++row) {
      // x^i y^j shifts the y-index by j; x^i leaves it unchanged.
      for (size_t k = 0; k < base.size(); ++k) out(row, j + static_cast<int>(k)) = base[k];
    }
  }
  return out;
}

}  // namespace dyncap
