#include "dyncap/greens.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "dyncap/errors.hpp"
#include "dyncap/parallel.hpp"

namespace dyncap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

HeightOptions quarter(double tol) {
  HeightOptions o;
  o.tol = tol / 4;
  return o;
}

template <typename Vec>
auto wedge_of(const Vec& z, const Vec& w) {
  return z[0] * w[1] - z[1] * w[0];
}

}  // namespace

double log_green_constant(const HomogeneousPair& F, const Place& place) {
  const int d = F.degree();
  return -log_abs_value(place, F.resultant()) / (d * (d - 1.0));
}

Green::Green(HomogeneousPair F, Place place) : H_(F, place), log_c_(log_green_constant(F, place)) {}

GreenValue Green::operator()(const Vec2q& z, const Vec2q& w, double tol) const {
  const Rational x = wedge_of(z, w);
  if (x.is_zero()) {
    if ((z[0].is_zero() && z[1].is_zero()) || (w[0].is_zero() && w[1].is_zero()))
      throw DomainError("(0,0) is not a projective point");
    return GreenValue::plus_infinity();
  }
  const auto hz = H_(z, quarter(tol)), hw = H_(w, quarter(tol));
  GreenValue g;
  g.value = -log_abs_value(H_.place(), x) + hz.value + hw.value + log_c_;
  g.error_bound = hz.total_error() + hw.total_error() + 4 * kEps * (1 + std::fabs(g.value));
  return g;
}

GreenValue Green::operator()(const Vec2c& z_in, const Vec2c& w_in, double tol) const {
  if (!H_.place().is_archimedean()) throw InvalidInput("complex points need the archimedean place");
  const Vec2c z = normalized(z_in), w = normalized(w_in);
  const std::complex<double> x = wedge_of(z, w);
  if (x == 0.0) return GreenValue::plus_infinity();
  const auto hz = H_(z, quarter(tol)), hw = H_(w, quarter(tol));
  GreenValue g;
  g.value = -std::log(std::abs(x)) + hz.value + hw.value + log_c_;
  g.error_bound = hz.total_error() + hw.total_error() + 4 * kEps * (1 + std::fabs(g.value));
  return g;
}

GreenValue green(const HomogeneousPair& F, const Place& place, const Vec2q& z, const Vec2q& w, double tol) {
  return Green(F, place)(z, w, tol);
}

GreenValue green(const HomogeneousPair& F, const Vec2c& z, const Vec2c& w, double tol) {
  return Green(F, Place::archimedean())(z, w, tol);
}

GreenValue green_good_reduction(const Integer& p, const Vec2q& z, const Vec2q& w) {
  if ((z[0].is_zero() && z[1].is_zero()) || (w[0].is_zero() && w[1].is_zero()))
    throw DomainError("(0,0) is not a projective point");
  if (!is_prime(p)) throw InvalidInput("good-reduction Green's function needs a prime");
  const Rational x = wedge_of(z, w);
  if (x.is_zero()) return GreenValue::plus_infinity();
  // -log|z^w| + log||z|| + log||w|| with ||.|| = p^-min v.
  const long k = valuation(p, x) - norm_valuation(p, z) - norm_valuation(p, w);
  GreenValue g;
  g.exact_multiple = k;
  g.value = static_cast<double>(k) * std::log(p.get_d());
  return g;
}

double invariance_residual(const HomogeneousPair& F, const Vec2c& z, const Vec2c& w, double tol) {
  const Green g(F, Place::archimedean());
  const auto pre = preimages(F, w);
  const Vec2c fz = F.evaluate(normalized(z));
  if (chordal_distance(z, w) == 0.0 || chordal_distance(fz, w) == 0.0)
    throw DomainError("invariance residual needs z outside {w} and phi^-1(w)");
  for (const auto& p : pre.points)
    if (chordal_distance(z, p.point) == 0.0) throw DomainError("z is a preimage of w");
  const auto lhs = g(fz, w, tol);
  double rhs = 0.0;
  for (const auto& p : pre.points) rhs += p.multiplicity * g(z, p.point, tol).value;
  return std::fabs(lhs.value - rhs);
}

namespace {

template <typename Vec, typename WedgeLog>
EnergyReport energy_impl(const Green& g, const std::vector<Vec>& pts, double tol, unsigned threads, WedgeLog wedge_log) {
  const std::size_t n = pts.size();
  if (n < 2) throw InvalidInput("pair energy needs at least two points");
  std::vector<double> h(n), herr(n), row(n), row_round(n);
  parallel_for(
      n,
      [&](std::size_t i) {
        const auto e = g.height()(pts[i], quarter(tol));
        h[i] = e.value;
        herr[i] = e.total_error();
      },
      threads);
  std::atomic<bool> duplicate{false};
  parallel_for(
      n,
      [&](std::size_t i) {
        double s = 0.0, r = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
          const double lw = wedge_log(pts[i], pts[j]);
          if (lw == -HUGE_VAL) {
            duplicate = true;
            return;
          }
          s -= lw;
          r += 4 * kEps * (1 + std::fabs(lw));
        }
        row[i] = s;
        row_round[i] = r;
      },
      threads);
  if (duplicate) throw DomainError("pair energy needs pairwise distinct points");
  EnergyReport rep;
  rep.n = n;
  double wedges = 0.0, heights = 0.0, err = 0.0, round = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wedges += row[i];
    heights += h[i];
    err += herr[i];
    round += row_round[i];
  }
  const double nn = static_cast<double>(n) * (n - 1.0);
  rep.pair_sum = 2 * wedges + 2 * (n - 1.0) * heights + nn * g.log_constant();
  rep.normalized = rep.pair_sum / nn;
  rep.error_bound = (2 * (n - 1.0) * err + 2 * round) / nn + 4 * kEps * (1 + std::fabs(rep.normalized));
  return rep;
}

}  // namespace

EnergyReport pair_energy(const Green& g, const std::vector<Vec2q>& points, double tol, unsigned threads) {
  const Place& v = g.height().place();
  return energy_impl(g, points, tol, threads, [&](const Vec2q& a, const Vec2q& b) {
    const Rational x = wedge_of(a, b);
    return x.is_zero() ? -HUGE_VAL : log_abs_value(v, x);
  });
}

EnergyReport pair_energy(const Green& g, const std::vector<Vec2c>& points, double tol, unsigned threads) {
  if (!g.height().place().is_archimedean()) throw InvalidInput("complex points need the archimedean place");
  std::vector<Vec2c> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(normalized(p));
  return energy_impl(g, pts, tol, threads, [](const Vec2c& a, const Vec2c& b) {
    const std::complex<double> x = wedge_of(a, b);
    return x == 0.0 ? -HUGE_VAL : std::log(std::abs(x));
  });
}

namespace {

struct Config {
  std::vector<std::complex<double>> u;
  std::vector<double> h;
  double sum = 0.0;  // sum over i < j of g
};

double pair_green(const Config& c, std::size_t i, std::size_t j, double log_c) {
  return -std::log(std::abs(c.u[i] - c.u[j])) + c.h[i] + c.h[j] + log_c;
}

}  // namespace

std::vector<MinimizationStep> energy_minimization_trace(const Green& g, std::size_t n_max, const MinimizeOptions& opts) {
  if (!g.height().place().is_archimedean()) throw InvalidInput("energy minimization runs at the archimedean place");
  if (n_max < 2) throw InvalidInput("n_max must be at least 2");
  HeightOptions hopt;
  hopt.tol = 1e-10;
  const auto height = [&](std::complex<double> u) { return g.height()(projective(u), hopt).value; };
  const double log_c = g.log_constant();
  std::vector<MinimizationStep> trace;
  for (std::size_t n = 2; n <= n_max; ++n) {
    std::vector<Config> best(static_cast<std::size_t>(opts.restarts));
    parallel_for(
        best.size(),
        [&](std::size_t r) {
          std::mt19937_64 rng(derive_seed(opts.seed, n * 100003 + r));
          std::normal_distribution<double> gauss;
          std::uniform_real_distribution<double> unif(0.0, 1.0);
          Config c;
          for (std::size_t i = 0; i < n; ++i) {
            c.u.push_back(std::polar(2.0 * std::sqrt(unif(rng)), 2 * M_PI * unif(rng)));
            c.h.push_back(height(c.u.back()));
          }
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) c.sum += pair_green(c, i, j, log_c);
          const double decay = std::pow(opts.radius_end / opts.radius_start, 1.0 / std::max(1, opts.sweeps - 1));
          double radius = opts.radius_start;
          for (int sweep = 0; sweep < opts.sweeps; ++sweep, radius *= decay) {
            for (std::size_t k = 0; k < n; ++k) {
              const std::complex<double> old_u = c.u[k];
              const double old_h = c.h[k];
              double before = 0.0;
              for (std::size_t j = 0; j < n; ++j)
                if (j != k) before += pair_green(c, k, j, log_c);
              c.u[k] = old_u + radius * (1 + std::abs(old_u)) * std::complex<double>(gauss(rng), gauss(rng));
              c.h[k] = height(c.u[k]);
              double after = 0.0;
              for (std::size_t j = 0; j < n; ++j)
                if (j != k) after += pair_green(c, k, j, log_c);
              if (std::isfinite(after) && after < before) {
                c.sum += after - before;
              } else {
                c.u[k] = old_u;
                c.h[k] = old_h;
              }
            }
          }
          best[r] = std::move(c);
        },
        opts.threads);
    const auto it = std::min_element(best.begin(), best.end(), [](const Config& a, const Config& b) { return a.sum < b.sum; });
    MinimizationStep step;
    step.n = n;
    for (const auto& u : it->u) step.points.push_back(projective(u));
    step.best = pair_energy(g, step.points, 1e-10, 1);
    step.violation = !trace.empty() && step.best.normalized < trace.back().best.normalized;
    trace.push_back(std::move(step));
  }
  return trace;
}

}  // namespace dyncap
