#include "dyncap/capacities.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "dyncap/errors.hpp"
#include "dyncap/parallel.hpp"

namespace dyncap {

namespace {

using cd = std::complex<double>;

double target_log(const HomogeneousPair& F, const Place& v) { return log_green_constant(F, v); }

// Scales z along its line so that the certified height is at most -margin.
Vec2c project_into(const LocalHeight& H, const Vec2c& z, double margin, double* height_bound) {
  HeightOptions o;
  o.tol = 1e-12;
  const Vec2c u = normalized(z);
  const auto h = H(u, o);
  const double shift = h.value + h.total_error() + margin;
  const Vec2c out = u * std::exp(-shift);
  if (height_bound) *height_bound = h.value + h.total_error() - shift;
  return out;
}

double log_pair_product(const std::vector<Vec2c>& pts) {
  double s = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) s += 2 * std::log(std::abs(wedge(pts[i], pts[j])));
  return s;
}

void finish(ConfigurationReport& r) {
  const double nn = static_cast<double>(r.n) * (r.n - 1.0);
  r.d0n = std::exp(r.log_pair_product / nn);
}

ConfigurationReport roots_of_unity(const HomogeneousPair& F, const Place& v, std::size_t n, const TdiamOptions& opts) {
  if (!v.is_archimedean()) throw InvalidInput("roots-of-unity configurations live at the archimedean place");
  const LocalHeight H(F, v);
  ConfigurationReport r;
  // A margin far below the membership tolerance keeps the closed-form value
  // for (x^2, y^2) intact to roundoff.
  for (std::size_t k = 0; k < n; ++k) {
    double hb = 0.0;
    r.points.push_back(project_into(H, projective(std::polar(1.0, 2 * M_PI * k / n)), 0.0, &hb));
    r.max_height = std::max(r.max_height, hb);
  }
  r.log_pair_product = log_pair_product(r.points);
  (void)opts;
  return r;
}

ConfigurationReport residue_classes(const HomogeneousPair& F, const Place& v, std::size_t n) {
  if (!v.is_finite()) throw InvalidInput("residue-class configurations need a finite place");
  const auto b = place_bounds(F, v);
  if (!b.good_reduction) throw InvalidInput("residue-class configurations need good reduction at " + v.label());
  if (v.prime() < static_cast<long>(n)) throw InvalidInput("residue-class configurations need p >= n");
  const int d = F.degree();
  // H_F(z) = log||z||_p - log|lambda|_p/(d-1): scale by p^e with
  // e = ceil(v(lambda)/(d-1)) to land in K.
  const ClearedPair c = clear_denominators(F);
  const long vl = valuation(v.prime(), c.lambda);
  const long e = vl >= 0 ? (vl + d - 2) / (d - 1) : -((-vl) / (d - 1));
  const Rational scale = pow(Rational(v.prime()), e);
  ConfigurationReport r;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2q z(scale, scale * Rational(static_cast<long>(j)));
    r.exact_points.push_back(z);
    r.points.emplace_back(z[0].to_double(), z[1].to_double());
  }
  const double log_p = v.log_prime();
  r.max_height = -static_cast<double>(e) * log_p + static_cast<double>(vl) * log_p / (d - 1);
  // Pairwise wedges are scale^2 (j - i) with |j - i|_p = 1.
  r.log_pair_product = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) r.log_pair_product += log_abs_value(v, wedge(r.exact_points[i], r.exact_points[j]));
  return r;
}

ConfigurationReport ascent(const HomogeneousPair& F, const Place& v, std::size_t n, const TdiamOptions& opts) {
  if (!v.is_archimedean()) throw InvalidInput("random-restart ascent runs at the archimedean place");
  const LocalHeight H(F, v);
  const double margin = opts.membership_tol / 4;
  struct Run {
    std::vector<Vec2c> pts;
    double value = -HUGE_VAL;
  };
  std::vector<Run> runs(static_cast<std::size_t>(std::max(1, opts.restarts)));
  parallel_for(
      runs.size(),
      [&](std::size_t r) {
        std::mt19937_64 rng(derive_seed(opts.seed, r));
        std::normal_distribution<double> g;
        Run run;
        for (std::size_t i = 0; i < n; ++i)
          run.pts.push_back(project_into(H, projective(cd(g(rng), g(rng))), margin, nullptr));
        const auto row = [&](std::size_t k, const Vec2c& z) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j)
            if (j != k) s += 2 * std::log(std::abs(wedge(z, run.pts[j])));
          return s;
        };
        run.value = log_pair_product(run.pts);
        const double decay = std::pow(opts.radius_end / opts.radius_start, 1.0 / std::max(1, opts.sweeps - 1));
        double radius = opts.radius_start;
        for (int sweep = 0; sweep < opts.sweeps; ++sweep, radius *= decay) {
          for (std::size_t k = 0; k < n; ++k) {
            Vec2c trial = run.pts[k];
            for (int c = 0; c < 2; ++c) trial[c] *= 1.0 + radius * cd(g(rng), g(rng));
            if (trial[0] == 0.0 && trial[1] == 0.0) continue;
            trial = project_into(H, trial, margin, nullptr);
            const double delta = row(k, trial) - row(k, run.pts[k]);
            if (std::isfinite(delta) && delta > 0.0) {
              run.pts[k] = trial;
              run.value += delta;
            }
          }
        }
        runs[r] = std::move(run);
      },
      opts.threads);
  const auto best = std::max_element(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.value < b.value; });
  ConfigurationReport r;
  r.points = best->pts;
  r.log_pair_product = log_pair_product(r.points);
  HeightOptions o;
  o.tol = 1e-12;
  r.max_height = -HUGE_VAL;
  for (const auto& z : r.points) {
    const auto h = H(z, o);
    r.max_height = std::max(r.max_height, h.value + h.total_error());
  }
  return r;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::RootsOfUnity: return "roots-of-unity";
    case Strategy::ResidueClasses: return "residue-classes";
    case Strategy::RandomRestartAscent: return "random-restart-ascent";
    case Strategy::Explicit: break;
  }
  return "explicit";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "roots-of-unity") return Strategy::RootsOfUnity;
  if (s == "residue-classes") return Strategy::ResidueClasses;
  if (s == "random-restart-ascent" || s == "ascent") return Strategy::RandomRestartAscent;
  if (s == "explicit") return Strategy::Explicit;
  throw InvalidInput("unknown strategy: " + s);
}

ConfigurationReport tdiam_estimate(const HomogeneousPair& F, const Place& place, std::size_t n, Strategy strategy,
                                   const TdiamOptions& opts) {
  if (n < 2) throw InvalidInput("transfinite diameter needs n >= 2");
  ConfigurationReport r;
  switch (strategy) {
    case Strategy::RootsOfUnity: r = roots_of_unity(F, place, n, opts); break;
    case Strategy::ResidueClasses: r = residue_classes(F, place, n); break;
    case Strategy::RandomRestartAscent: r = ascent(F, place, n, opts); break;
    case Strategy::Explicit: throw InvalidInput("explicit configurations go through evaluate_configuration");
  }
  r.n = n;
  r.place = place;
  r.strategy = strategy;
  r.membership_tol = opts.membership_tol;
  r.target = std::exp(target_log(F, place));
  if (!(r.max_height <= opts.membership_tol))
    throw NumericalFailure("configuration point could not be certified inside the filled Julia set");
  finish(r);
  return r;
}

ConfigurationReport evaluate_configuration(const HomogeneousPair& F, const Place& place, const std::vector<Vec2q>& points,
                                           double membership_tol) {
  if (points.size() < 2) throw InvalidInput("a configuration needs at least two points");
  const LocalHeight H(F, place);
  ConfigurationReport r;
  r.n = points.size();
  r.place = place;
  r.strategy = Strategy::Explicit;
  r.membership_tol = membership_tol;
  r.exact_points = points;
  r.max_height = -HUGE_VAL;
  for (const auto& z : points) {
    const auto m = julia_membership(H, z, membership_tol);
    if (m.verdict != Verdict::Inside) throw NumericalFailure("configuration point not certified inside K");
    r.max_height = std::max(r.max_height, m.height.value + m.height.total_error());
    r.points.emplace_back(z[0].to_double(), z[1].to_double());
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const Rational w = wedge(points[i], points[j]);
      if (w.is_zero()) throw InvalidInput("configuration has repeated points");
      r.log_pair_product += log_abs_value(place, w);
    }
  r.target = std::exp(target_log(F, place));
  finish(r);
  return r;
}

ConfigurationReport evaluate_configuration(const HomogeneousPair& F, const std::vector<Vec2c>& points,
                                           double membership_tol) {
  if (points.size() < 2) throw InvalidInput("a configuration needs at least two points");
  const Place place = Place::archimedean();
  const LocalHeight H(F, place);
  ConfigurationReport r;
  r.n = points.size();
  r.place = place;
  r.strategy = Strategy::Explicit;
  r.membership_tol = membership_tol;
  r.points = points;
  r.max_height = -HUGE_VAL;
  for (const auto& z : points) {
    const auto m = julia_membership(H, z, membership_tol);
    if (m.verdict != Verdict::Inside) throw NumericalFailure("configuration point not certified inside K");
    r.max_height = std::max(r.max_height, m.height.value + m.height.total_error());
  }
  r.log_pair_product = log_pair_product(points);
  if (!std::isfinite(r.log_pair_product)) throw InvalidInput("configuration has repeated points");
  r.target = std::exp(target_log(F, place));
  finish(r);
  return r;
}

MonotonicityTrace tdiam_monotonicity_trace(const HomogeneousPair& F, const Place& place, std::size_t n_max,
                                           Strategy strategy, const TdiamOptions& opts) {
  if (n_max < 2) throw InvalidInput("n_max must be at least 2");
  MonotonicityTrace t;
  for (std::size_t n = 2; n <= n_max; ++n) {
    t.reports.push_back(tdiam_estimate(F, place, n, strategy, opts));
    const size_t i = t.reports.size() - 1;
    if (i > 0 && t.reports[i].d0n > t.reports[i - 1].d0n * (1 + 1e-12)) t.violations.push_back(i);
  }
  return t;
}

DetCheck det_identity_check(const HomogeneousPair& F, int t, int max_size) {
  if (t < 1) throw InvalidInput("t must be at least 1");
  const int size = (t + 1) * F.degree();
  if (size > max_size) throw ResourceLimit("determinant of size " + std::to_string(size) + " exceeds the cap");
  DetCheck c;
  c.t = t;
  c.det_abs = abs(exact_determinant(det_matrix(F, t)));
  c.res_power = pow(abs(F.resultant()), static_cast<long>(t) * (t + 1) / 2);
  c.equal = c.det_abs == c.res_power;
  return c;
}

AdelicTdiamSum adelic_tdiam_sum(const HomogeneousPair& F, std::size_t n, const TdiamOptions& opts) {
  const int d = F.degree();
  const Rational& res = F.resultant();
  AdelicTdiamSum out;
  std::vector<Place> places{Place::archimedean()};
  for (const auto& p : support_primes(res)) places.push_back(Place::finite(p));
  // Exponents of log p: the archimedean term carries -v_p(Res)/(d(d-1)),
  // the p-adic one +v_p(Res)/(d(d-1)).
  std::map<Integer, Rational> exponent;
  const Rational w(Integer(1), Integer(d * (d - 1)));
  for (const auto& v : places) {
    PlaceCapacity pc;
    pc.place = v;
    pc.target_log = target_log(F, v);
    if (v.is_archimedean()) {
      for (const auto& p : places)
        if (p.is_finite()) exponent[p.prime()] -= w * Rational(valuation(p.prime(), res));
      pc.estimate_log = std::log(tdiam_estimate(F, v, n, Strategy::RootsOfUnity, opts).d0n);
    } else {
      exponent[v.prime()] += w * Rational(valuation(v.prime(), res));
      if (place_bounds(F, v).good_reduction && v.prime() >= static_cast<long>(n))
        pc.estimate_log = std::log(tdiam_estimate(F, v, n, Strategy::ResidueClasses, opts).d0n);
    }
    out.target_sum += pc.target_log;
    if (pc.estimate_log) out.estimate_sum += *pc.estimate_log;
    out.places.push_back(pc);
  }
  // The archimedean exponent follows from |Res|_inf = prod p^v_p(Res).
  out.exact_zero = std::all_of(exponent.begin(), exponent.end(), [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

}  // namespace dyncap
