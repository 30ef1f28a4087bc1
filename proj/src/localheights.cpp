#include "dyncap/localheights.hpp"

#include <cmath>
#include <limits>

#include "dyncap/errors.hpp"

namespace dyncap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// a / b mod p^k for a p-integral rational.
Integer residue(const Rational& x, const Integer& modulus) {
  Integer inv, r;
  const Integer den = x.den(), num = x.num();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw InvalidInput("rational is not p-integral");
  r = num * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

// Valuation of a residue known modulo p^prec, capped at prec.
long residue_valuation(const Integer& r, const Integer& p, long prec) {
  if (r == 0) return prec;
  Integer rest;
  return std::min(prec, static_cast<long>(mpz_remove(rest.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t())));
}

Integer eval_form_mod(const QPoly& form, const Integer& x, const Integer& y, const Integer& modulus) {
  const int d = static_cast<int>(form.size()) - 1;
  Integer acc = 0, xpow = 1;
  for (int i = d; i >= 0; --i) {
    acc = acc * y + form[static_cast<size_t>(i)].num() * xpow;
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), modulus.get_mpz_t());
    xpow = xpow * x;
    mpz_mod(xpow.get_mpz_t(), xpow.get_mpz_t(), modulus.get_mpz_t());
  }
  return acc;
}

}  // namespace

LocalHeight::LocalHeight(HomogeneousPair F, Place place, const BoundsOptions& bounds)
    : F_(std::move(F)), place_(std::move(place)), cleared_(clear_denominators(F_)) {
  bounds_ = place_bounds(F_, place_, bounds);
  for (const auto* form : {&F_.f1(), &F_.f2()}) {
    double s = 0.0;
    for (const auto& c : *form) s += std::fabs(c.to_double());
    coeff_sum_ = std::max(coeff_sum_, s);
  }
  if (place_.is_finite()) res_valuation_ = valuation(place_.prime(), cleared_.resultant);
}

int LocalHeight::iterations_for(double tol) const {
  const double d = F_.degree();
  if (bounds_.C <= 0.0) return 0;
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  const double n = std::ceil(std::log(bounds_.C / ((d - 1.0) * tol)) / std::log(d));
  return std::max(0, static_cast<int>(n));
}

LocalHeightEstimate LocalHeight::operator()(const Vec2q& z, const HeightOptions& opts) const {
  if (z[0].is_zero() && z[1].is_zero()) throw DomainError("local height is -infinity at the origin");
  if (place_.is_finite()) return finite_height(z, opts);
  // Normalize exactly before converting to double.
  const Rational m = std::max(abs(z[0]), abs(z[1]));
  const Vec2c unit((z[0] / m).to_double(), (z[1] / m).to_double());
  return arch_height(unit, m.log_abs(), opts);
}

LocalHeightEstimate LocalHeight::operator()(const Vec2c& z, const HeightOptions& opts) const {
  if (!place_.is_archimedean()) throw InvalidInput("complex lifts are only supported at the archimedean place");
  const double n = sup_norm(z);
  if (n == 0.0) throw DomainError("local height is -infinity at the origin");
  if (!std::isfinite(n)) throw InvalidInput("non-finite point");
  return arch_height(z / n, std::log(n), opts);
}

LocalHeightEstimate LocalHeight::arch_height(const Vec2c& unit_in, double log_norm, const HeightOptions& opts) const {
  const int d = F_.degree();
  const int n = std::max(opts.min_iterations, iterations_for(opts.tol));
  if (n > opts.max_iterations) throw ResourceLimit("local height needs more than max_iterations steps");
  LocalHeightEstimate out;
  out.value = log_norm;
  if (opts.record_trajectory) out.trajectory.push_back(out.value);
  Vec2c unit = unit_in;
  double weight = 1.0 / d;
  // Relative error of one evaluation of ||F(u)|| with ||u|| = 1 and
  // ||F(u)|| >= C_v.
  const double step_roundoff = (d + 2) * kEps * coeff_sum_ / bounds_.lower;
  for (int j = 0; j < n; ++j, weight /= d) {
    const Vec2c w = F_.evaluate(unit);
    const double nw = sup_norm(w);
    if (!(nw > 0.0) || !std::isfinite(nw)) throw NumericalFailure("local height iteration left the finite range");
    out.value += weight * std::log(nw);
    if (opts.record_trajectory) out.trajectory.push_back(out.value);
    unit = w / nw;
  }
  out.iterations = n;
  out.error_bound = bounds_.C / (std::pow(static_cast<double>(d), n) * (d - 1));
  if (n > 0) out.roundoff = step_roundoff / (d - 1) + 4 * kEps * (1.0 + std::fabs(out.value));
  return out;
}

LocalHeightEstimate LocalHeight::finite_height(const Vec2q& z, const HeightOptions& opts) const {
  const int d = F_.degree();
  const Integer& p = place_.prime();
  const double log_p = place_.log_prime();
  const long e0 = norm_valuation(p, z);
  const double log_lambda = log_abs_value(place_, cleared_.lambda);
  LocalHeightEstimate out;
  out.value = -static_cast<double>(e0) * log_p;

  if (res_valuation_ == 0) {
    // G = lambda F with unit resultant: H_G(z) = log||z||_p exactly.
    out.closed_form = true;
    const int n = opts.record_trajectory ? opts.min_iterations : 0;
    if (opts.record_trajectory) {
      for (int j = 0; j <= n; ++j)
        out.trajectory.push_back(out.value - (1.0 - std::pow(static_cast<double>(d), -j)) * log_lambda / (d - 1));
    }
    out.value -= log_lambda / (d - 1);
    out.iterations = n;
    return out;
  }

  const int n = std::max(opts.min_iterations, iterations_for(opts.tol));
  if (n > opts.max_iterations) throw ResourceLimit("local height needs more than max_iterations steps");
  // ||G(u)||_p >= p^-v(Res G) on unit vectors, so n steps consume at most
  // n * v(Res G) digits.
  long prec = res_valuation_ * n + 2;
  const Integer modulus = pow(p, static_cast<unsigned long>(prec));
  const Rational shift = pow(Rational(p), -e0);
  Integer x = residue(z[0] * shift, modulus), y = residue(z[1] * shift, modulus);
  if (opts.record_trajectory) out.trajectory.push_back(out.value);
  double weight = 1.0 / d;
  for (int j = 0; j < n; ++j, weight /= d) {
    const Integer gx = eval_form_mod(cleared_.g1, x, y, modulus);
    const Integer gy = eval_form_mod(cleared_.g2, x, y, modulus);
    const long e = std::min(residue_valuation(gx, p, prec), residue_valuation(gy, p, prec));
    if (e >= prec || e > res_valuation_) throw NumericalFailure("p-adic precision exhausted in local height");
    // log||F(u)|| = log||G(u)|| - log|lambda|.
    out.value += weight * (-static_cast<double>(e) * log_p - log_lambda);
    if (opts.record_trajectory) out.trajectory.push_back(out.value);
    const Integer pe = pow(p, static_cast<unsigned long>(e));
    mpz_divexact(x.get_mpz_t(), gx.get_mpz_t(), pe.get_mpz_t());
    mpz_divexact(y.get_mpz_t(), gy.get_mpz_t(), pe.get_mpz_t());
    prec -= e;
  }
  out.iterations = n;
  out.error_bound = bounds_.C / (std::pow(static_cast<double>(d), n) * (d - 1));
  return out;
}

LocalHeightEstimate local_height(const HomogeneousPair& F, const Place& place, const Vec2q& z, double tol) {
  HeightOptions opts;
  opts.tol = tol;
  return LocalHeight(F, place)(z, opts);
}

LocalHeightEstimate local_height(const HomogeneousPair& F, const Vec2c& z, double tol) {
  HeightOptions opts;
  opts.tol = tol;
  return LocalHeight(F, Place::archimedean())(z, opts);
}

namespace {

template <typename Vec, typename Scalar>
LHReport lh_report(const LocalHeight& H, const Vec& z, const Scalar& c, double log_c, double log_norm, double tol) {
  HeightOptions opts;
  opts.tol = tol;
  const int d = H.map().degree();
  const auto hz = H(z, opts);
  const Vec fz = H.map()(z);
  const auto hfz = H(fz, opts);
  const Vec cz = z * c;
  const auto hcz = H(cz, opts);
  LHReport r;
  r.lh1 = std::fabs(hz.value - log_norm);
  r.lh1_bound = H.bounds().C / (d - 1) + hz.total_error();
  r.lh2 = std::fabs(hfz.value - d * hz.value);
  r.lh2_bound = hfz.total_error() + d * hz.total_error() + 8 * kEps * (1 + std::fabs(hfz.value));
  r.lh3 = std::fabs(hcz.value - hz.value - log_c);
  r.lh3_bound = hcz.total_error() + hz.total_error() + 8 * kEps * (1 + std::fabs(hcz.value));
  return r;
}

}  // namespace

LHReport check_lh_properties(const LocalHeight& H, const Vec2q& z, const Rational& c, double tol) {
  if (c.is_zero()) throw InvalidInput("LH3 needs a nonzero scalar");
  return lh_report(H, z, c, log_abs_value(H.place(), c), log_sup_norm(H.place(), z), tol);
}

LHReport check_lh_properties(const LocalHeight& H, const Vec2c& z, std::complex<double> c, double tol) {
  if (c == 0.0) throw InvalidInput("LH3 needs a nonzero scalar");
  return lh_report(H, z, c, std::log(std::abs(c)), log_sup_norm(z), tol);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Outside: return "outside";
    case Verdict::Undetermined: break;
  }
  return "undetermined";
}

namespace {

JuliaMembership classify(LocalHeightEstimate h, double tol) {
  JuliaMembership m;
  const double err = h.total_error();
  if (h.value + err <= tol) {
    m.verdict = Verdict::Inside;
  } else if (h.value - err > 0.0) {
    m.verdict = Verdict::Outside;
  }
  m.height = std::move(h);
  return m;
}

}  // namespace

JuliaMembership julia_membership(const LocalHeight& H, const Vec2q& z, double tol) {
  HeightOptions opts;
  opts.tol = tol;
  return classify(H(z, opts), tol);
}

JuliaMembership julia_membership(const LocalHeight& H, const Vec2c& z, double tol) {
  HeightOptions opts;
  opts.tol = tol;
  return classify(H(z, opts), tol);
}

LocalHeightEstimate cs_height_infty(const LocalHeight& H, const Vec2q& z, double tol) {
  if (z[0].is_zero()) throw DomainError("h_(inf) is undefined at infinity");
  HeightOptions opts;
  opts.tol = tol;
  return H(Vec2q(Rational(1), z[1] / z[0]), opts);
}

LocalHeightEstimate cs_height_infty(const LocalHeight& H, const Vec2c& z, double tol) {
  if (z[0] == 0.0) throw DomainError("h_(inf) is undefined at infinity");
  HeightOptions opts;
  opts.tol = tol;
  return H(Vec2c(1.0, z[1] / z[0]), opts);
}

LocalHeightEstimate cs_height_zero(const LocalHeight& H, const Vec2q& z, double tol) {
  if (z[1].is_zero()) throw DomainError("h_(0) is undefined at zero");
  HeightOptions opts;
  opts.tol = tol;
  return H(Vec2q(z[0] / z[1], Rational(1)), opts);
}

LocalHeightEstimate cs_height_zero(const LocalHeight& H, const Vec2c& z, double tol) {
  if (z[1] == 0.0) throw DomainError("h_(0) is undefined at zero");
  HeightOptions opts;
  opts.tol = tol;
  return H(Vec2c(z[0] / z[1], 1.0), opts);
}

}  // namespace dyncap
