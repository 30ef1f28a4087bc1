#include "dyncap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "dyncap/errors.hpp"
#include "dyncap/parallel.hpp"

namespace dyncap {

namespace {

using cd = std::complex<double>;

CPoly reversed(CPoly p) {
  std::reverse(p.begin(), p.end());
  return p;
}

CPoly derivative_n(CPoly p, int k) {
  for (int i = 0; i < k; ++i) p = derivative(p);
  return p;
}

// Root u of `core` (in the chart (1,u)) as a normalized point, polished in
// the chart where its coordinate is at most 1.
Vec2c polished_point(const CPoly& core, const CPoly& core_rev, cd u, int multiplicity, int steps) {
  if (std::abs(u) <= 1.0) {
    if (multiplicity > 1) u = newton_polish(derivative_n(core, multiplicity - 1), u, steps);
    else u = newton_polish(core, u, steps);
    return {1.0, u};
  }
  cd t = 1.0 / u;
  if (multiplicity > 1) t = newton_polish(derivative_n(core_rev, multiplicity - 1), t, steps);
  else t = newton_polish(core_rev, t, steps);
  return normalized(Vec2c(t, 1.0));
}

void append_root(PreimageSet& out, const Vec2c& z, int m) { out.points.push_back({normalized(z), m}); }

void check_residuals(const HomogeneousPair& F, PreimageSet& out, const PreimageOptions& opts) {
  for (const auto& p : out.points) {
    const double r = chordal_distance(F.evaluate(p.point), out.target);
    out.max_residual = std::max(out.max_residual, r);
  }
  if (!(out.max_residual <= opts.residual_tol)) {
    std::ostringstream msg;
    msg << "preimage residual " << out.max_residual << " exceeds " << opts.residual_tol;
    throw NumericalFailure(msg.str());
  }
  if (out.total_multiplicity() != F.degree()) throw NumericalFailure("preimage multiplicities do not sum to d");
}

}  // namespace

Vec2c normalized(const Vec2c& z) {
  const double a = std::abs(z[0]), b = std::abs(z[1]);
  if (a == 0.0 && b == 0.0) throw DomainError("(0,0) is not a projective point");
  if (a >= b) return {1.0, z[1] / z[0]};
  return {z[0] / z[1], 1.0};
}

std::optional<cd> affine(const Vec2c& z) {
  if (z[0] == 0.0) {
    if (z[1] == 0.0) throw DomainError("(0,0) is not a projective point");
    return std::nullopt;
  }
  return z[1] / z[0];
}

double chordal_distance(const Vec2c& z, const Vec2c& w) {
  const Vec2c a = normalized(z), b = normalized(w);
  return std::abs(a[0] * b[1] - a[1] * b[0]) / (a.norm() * b.norm());
}

int PreimageSet::total_multiplicity() const {
  int s = 0;
  for (const auto& p : points) s += p.multiplicity;
  return s;
}

PreimageSet preimages(const HomogeneousPair& F, const Vec2c& w_in, const PreimageOptions& opts) {
  const Vec2c w = normalized(w_in);
  const int d = F.degree();
  CPoly c(static_cast<size_t>(d + 1));
  for (size_t i = 0; i <= static_cast<size_t>(d); ++i)
    c[i] = w[1] * F.f1()[i].to_double() - w[0] * F.f2()[i].to_double();
  PreimageSet out;
  out.target = w;
  size_t low = 0, high = 0;
  while (low <= static_cast<size_t>(d) && c[low] == 0.0) ++low;
  if (low > static_cast<size_t>(d)) throw NumericalFailure("preimage equation vanished identically");
  while (c[static_cast<size_t>(d) - high] == 0.0) ++high;
  if (low > 0) append_root(out, Vec2c(1.0, 0.0), static_cast<int>(low));
  if (high > 0) append_root(out, infinity_point(), static_cast<int>(high));
  const CPoly core(c.begin() + static_cast<long>(low), c.end() - static_cast<long>(high));
  const CPoly core_rev = reversed(core);
  if (core.size() > 1) {
    const auto roots = polynomial_roots(core, opts.roots);
    std::vector<Vec2c> pts;
    pts.reserve(roots.size());
    for (const auto& u : roots) pts.push_back(polished_point(core, core_rev, u, 1, opts.roots.polish_steps));
    // Single-linkage clusters on the sphere.
    std::vector<int> label(pts.size(), -1);
    int clusters = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (label[i] >= 0) continue;
      label[i] = clusters;
      std::vector<size_t> stack{i};
      while (!stack.empty()) {
        const size_t a = stack.back();
        stack.pop_back();
        for (size_t j = 0; j < pts.size(); ++j) {
          if (label[j] < 0 && chordal_distance(pts[a], pts[j]) <= opts.cluster_radius) {
            label[j] = clusters;
            stack.push_back(j);
          }
        }
      }
      ++clusters;
    }
    for (int k = 0; k < clusters; ++k) {
      cd sum = 0.0;
      int m = 0;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (label[i] != k) continue;
        sum += roots[i];
        ++m;
      }
      if (m == 1) {
        for (size_t i = 0; i < pts.size(); ++i)
          if (label[i] == k) append_root(out, pts[i], 1);
        continue;
      }
      // The centroid of a cluster approximates a multiple root far better
      // than its members; polish on the (m-1)-th derivative.
      append_root(out, polished_point(core, core_rev, sum / static_cast<double>(m), m, opts.roots.polish_steps), m);
    }
  }
  check_residuals(F, out, opts);
  return out;
}

PreimageSet preimages(const HomogeneousPair& F, const Vec2q& w, const PreimageOptions& opts) {
  if (w[0].is_zero() && w[1].is_zero()) throw DomainError("(0,0) is not a projective point");
  const int d = F.degree();
  QPoly c(static_cast<size_t>(d + 1));
  for (size_t i = 0; i <= static_cast<size_t>(d); ++i) c[i] = w[1] * F.f1()[i] - w[0] * F.f2()[i];
  PreimageSet out;
  out.target = normalized(Vec2c(w[0].to_double(), w[1].to_double()));
  size_t low = 0, high = 0;
  while (c[low].is_zero()) ++low;  // never all zero: Res(F) != 0
  while (c[static_cast<size_t>(d) - high].is_zero()) ++high;
  if (low > 0) append_root(out, Vec2c(1.0, 0.0), static_cast<int>(low));
  if (high > 0) append_root(out, infinity_point(), static_cast<int>(high));
  const QPoly core(c.begin() + static_cast<long>(low), c.end() - static_cast<long>(high));
  if (core.size() > 1) {
    const auto parts = squarefree_decomposition(core);
    for (size_t k = 0; k < parts.size(); ++k) {
      if (degree(parts[k]) < 1) continue;
      const CPoly s = to_complex(parts[k]);
      const CPoly s_rev = reversed(s);
      for (const auto& u : polynomial_roots(s, opts.roots))
        append_root(out, polished_point(s, s_rev, u, 1, opts.roots.polish_steps), static_cast<int>(k + 1));
    }
  }
  check_residuals(F, out, opts);
  return out;
}

bool is_exceptional(const HomogeneousPair& F, const Vec2c& z, double tol) {
  PreimageOptions opts;
  opts.cluster_radius = tol;
  std::vector<Vec2c> E{normalized(z)};
  const auto contains = [&](const Vec2c& p) {
    return std::any_of(E.begin(), E.end(), [&](const Vec2c& e) { return chordal_distance(e, p) <= tol; });
  };
  for (const auto& p : preimages(F, z, opts).points) {
    if (!contains(p.point)) E.push_back(p.point);
    if (E.size() > 2) return false;
  }
  for (const auto& e : E) {
    if (!contains(F.evaluate(e))) return false;
    for (const auto& p : preimages(F, e, opts).points)
      if (!contains(p.point)) return false;
  }
  return true;
}

double DiscreteMeasure::total_weight() const {
  double s = 0.0;
  for (const auto& a : atoms) s += a.weight;
  return s;
}

void DiscreteMeasure::validate() const {
  if (atoms.empty()) throw InvalidInput("empty measure");
  for (const auto& a : atoms)
    if (!(a.weight > 0.0)) throw InvalidInput("measure weights must be positive");
  if (std::fabs(total_weight() - 1.0) > 1e-12) throw InvalidInput("measure weights must sum to 1");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DiscreteMeasure sample_canonical_measure(const HomogeneousPair& F, const Vec2c& z0_in, const SamplingOptions& opts) {
  const Vec2c z0 = normalized(z0_in);
  if (opts.depth < 0) throw InvalidInput("depth must be nonnegative");
  if (opts.samples == 0) throw InvalidInput("sample count must be positive");
  if (is_exceptional(F, z0)) throw InvalidInput("starting point is exceptional");
  DiscreteMeasure mu;
  if (opts.depth == 0) {
    mu.atoms.push_back({z0, 1.0});
    return mu;
  }
  const int d = F.degree();
  const double weight = 1.0 / static_cast<double>(opts.samples);
  mu.atoms.resize(opts.samples);
  parallel_for(
      opts.samples,
      [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(opts.seed, i));
        std::uniform_int_distribution<int> pick(0, d - 1);
        Vec2c z = z0;
        for (int step = 0; step < opts.depth; ++step) {
          const auto pre = preimages(F, z, opts.preimage);
          int k = pick(rng);
          for (const auto& p : pre.points) {
            if (k < p.multiplicity) {
              z = p.point;
              break;
            }
            k -= p.multiplicity;
          }
        }
        mu.atoms[i] = {z, weight};
      },
      opts.threads);
  return mu;
}

DiscreteMeasure pushforward(const HomogeneousPair& F, const DiscreteMeasure& mu) {
  DiscreteMeasure out;
  out.atoms.reserve(mu.atoms.size());
  for (const auto& a : mu.atoms) out.atoms.push_back({normalized(F.evaluate(a.point)), a.weight});
  return out;
}

std::array<double, 3> sphere_point(const Vec2c& z_in) {
  const Vec2c z = normalized(z_in);
  const double a = std::norm(z[0]), b = std::norm(z[1]), s = a + b;
  const cd xy = 2.0 * std::conj(z[0]) * z[1] / s;
  return {xy.real(), xy.imag(), (b - a) / s};
}

namespace {
struct Stats {
  std::array<double, 3> mean{}, var_of_mean{};
};

Stats sphere_stats(const DiscreteMeasure& mu) {
  Stats s;
  const double total = mu.total_weight();
  std::vector<std::array<double, 3>> pts;
  pts.reserve(mu.atoms.size());
  for (const auto& a : mu.atoms) {
    pts.push_back(sphere_point(a.point));
    for (int k = 0; k < 3; ++k) s.mean[k] += a.weight / total * pts.back()[k];
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    const double w = mu.atoms[i].weight / total;
    for (int k = 0; k < 3; ++k) s.var_of_mean[k] += w * w * (pts[i][k] - s.mean[k]) * (pts[i][k] - s.mean[k]);
  }
  return s;
}
}  // namespace

MomentTest moment_test(const DiscreteMeasure& a, const DiscreteMeasure& b, double sigmas) {
  const Stats sa = sphere_stats(a), sb = sphere_stats(b);
  MomentTest t;
  t.sigmas = sigmas;
  t.passed = true;
  for (int k = 0; k < 3; ++k) {
    t.difference[k] = sa.mean[k] - sb.mean[k];
    t.sigma[k] = std::sqrt(sa.var_of_mean[k] + sb.var_of_mean[k]);
    if (!(std::fabs(t.difference[k]) <= sigmas * t.sigma[k] + t.floor)) t.passed = false;
  }
  return t;
}

MomentTest pushforward_moment_test(const HomogeneousPair& F, const Vec2c& z0, const SamplingOptions& opts) {
  if (opts.depth < 1) throw InvalidInput("pushforward test needs depth >= 1");
  const DiscreteMeasure deep = sample_canonical_measure(F, z0, opts);
  SamplingOptions shallow = opts;
  shallow.depth = opts.depth - 1;
  shallow.seed = derive_seed(opts.seed, 0xFFFFFFFFULL);
  return moment_test(pushforward(F, deep), sample_canonical_measure(F, z0, shallow));
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, int digits) {
  out << "re,im,weight\n" << std::setprecision(digits);
  for (const auto& a : mu.atoms) {
    if (const auto z = affine(a.point)) {
      out << z->real() << ',' << z->imag() << ',' << a.weight << '\n';
    } else {
      out << "inf,0," << a.weight << '\n';
    }
  }
}

DiscreteMeasure read_measure_csv(std::istream& in) {
  DiscreteMeasure mu;
  std::string line;
  if (!std::getline(in, line) || line.rfind("re,im,weight", 0) != 0) throw InvalidInput("measure CSV needs header re,im,weight");
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream row(line);
    std::string re, im, w;
    if (!std::getline(row, re, ',') || !std::getline(row, im, ',') || !std::getline(row, w))
      throw InvalidInput("malformed measure CSV row: " + line);
    try {
      const double weight = std::stod(w);
      if (re == "inf") {
        mu.atoms.push_back({infinity_point(), weight});
      } else {
        mu.atoms.push_back({normalized(projective({std::stod(re), std::stod(im)})), weight});
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("malformed measure CSV row: " + line);
    }
  }
  return mu;
}

}  // namespace dyncap
