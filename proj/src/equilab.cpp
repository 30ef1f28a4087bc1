#include "dyncap/equilab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dyncap/errors.hpp"
#include "dyncap/greens.hpp"

namespace dyncap {

namespace {

using cd = std::complex<double>;

std::vector<double> radial_histogram(const DiscreteMeasure& mu, int bins) {
  std::vector<double> h(static_cast<size_t>(bins), 0.0);
  for (const auto& a : mu.atoms) {
    const auto z = affine(a.point);
    const double t = z ? 2 / M_PI * std::atan(std::abs(*z)) : 1.0;
    h[static_cast<size_t>(std::clamp(static_cast<int>(t * bins), 0, bins - 1))] += a.weight;
  }
  return h;
}

std::vector<double> angular_histogram(const DiscreteMeasure& mu, int bins) {
  std::vector<double> h(static_cast<size_t>(bins), 0.0);
  for (const auto& a : mu.atoms) {
    const auto z = affine(a.point);
    if (!z) continue;
    const double t = (std::arg(*z) + M_PI) / (2 * M_PI);
    h[static_cast<size_t>(std::clamp(static_cast<int>(t * bins), 0, bins - 1))] += a.weight;
  }
  return h;
}

double half_l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / 2;
}

void check_comparison_args(const DiscreteMeasure& mu, int k_max, int bins) {
  mu.validate();
  if (k_max < 1) throw InvalidInput("k_max must be positive");
  if (bins < 1) throw InvalidInput("bins must be positive");
}

ComparisonReport compare(const DiscreteMeasure& mu, std::vector<cd> ref_moments, std::vector<double> ref_radial,
                         std::vector<double> ref_angular, int k_max, int bins) {
  ComparisonReport r;
  r.bins = bins;
  r.moments.k_max = k_max;
  r.moments.moments = measure_moments(mu, k_max);
  r.moments.reference = std::move(ref_moments);
  r.radial = radial_histogram(mu, bins);
  r.angular = angular_histogram(mu, bins);
  r.radial_reference = std::move(ref_radial);
  r.angular_reference = std::move(ref_angular);
  r.radial_discrepancy = half_l1(r.radial, r.radial_reference);
  r.angular_discrepancy = half_l1(r.angular, r.angular_reference);
  return r;
}

Rational discriminant_quotient(const QPoly& p) {
  const int n = degree(p);
  return form_resultant(p, n, derivative(p), n - 1) / p.back();
}

}  // namespace

std::vector<cd> measure_moments(const DiscreteMeasure& mu, int k_max) {
  std::vector<cd> m(static_cast<size_t>(std::max(0, k_max)), cd(0));
  for (const auto& a : mu.atoms) {
    const auto z = affine(a.point);
    if (!z) continue;
    cd zk = 1.0;
    for (int k = 0; k < k_max; ++k) {
      zk *= *z;
      m[static_cast<size_t>(k)] += a.weight * zk;
    }
  }
  return m;
}

double MomentReport::max_difference() const {
  double m = 0.0;
  for (size_t k = 0; k < moments.size(); ++k)
    m = std::max(m, std::abs(moments[k] - (k < reference.size() ? reference[k] : cd(0))));
  return m;
}

DiscreteMeasure roots_of_unity_measure(std::size_t n, bool primitive_only) {
  if (n < 1) throw InvalidInput("n must be positive");
  DiscreteMeasure mu;
  for (std::size_t k = 0; k < n; ++k) {
    if (primitive_only && std::gcd(k, n) != 1) continue;
    mu.atoms.push_back({projective(std::polar(1.0, 2 * M_PI * static_cast<double>(k) / static_cast<double>(n))), 0.0});
  }
  for (auto& a : mu.atoms) a.weight = 1.0 / static_cast<double>(mu.atoms.size());
  return mu;
}

BiluReport bilu_experiment(std::size_t n, bool cyclotomic, int k_max, unsigned threads) {
  if (n < 2) throw InvalidInput("bilu experiment needs n >= 2");
  const DiscreteMeasure mu = roots_of_unity_measure(n, cyclotomic);
  BiluReport r;
  r.atoms = mu.atoms.size();
  r.moments.k_max = k_max;
  r.moments.moments = measure_moments(mu, k_max);
  r.moments.reference.assign(static_cast<size_t>(k_max), cd(0));
  std::vector<Vec2c> pts;
  for (const auto& a : mu.atoms) pts.push_back(a.point);
  const HomogeneousPair square(QPoly{Rational(1), Rational(0), Rational(0)}, QPoly{Rational(0), Rational(0), Rational(1)});
  if (pts.size() >= 2) r.energy = pair_energy(Green(square, Place::archimedean()), pts, 1e-12, threads);
  return r;
}

std::vector<FamilyMember> cyclotomic_family(int m_min, int m_max) {
  if (m_min < 1 || m_max < m_min) throw InvalidInput("bad cyclotomic range");
  std::vector<FamilyMember> out;
  for (int m = m_min; m <= m_max; ++m) {
    const size_t half = size_t(1) << (m - 1);
    QPoly p(half + 1, Rational(0));
    p[0] = Rational(1);
    p[half] = Rational(1);
    out.push_back({m, "Phi_" + std::to_string(size_t(1) << m), p});
  }
  return out;
}

std::vector<FamilyMember> roots_of_unity_family(const std::vector<int>& ns) {
  std::vector<FamilyMember> out;
  for (int n : ns) {
    if (n < 1) throw InvalidInput("n must be positive");
    QPoly p(static_cast<size_t>(n) + 1, Rational(0));
    p[0] = Rational(-1);
    p[static_cast<size_t>(n)] = Rational(1);
    out.push_back({n, "x^" + std::to_string(n) + "-1", p});
  }
  return out;
}

std::vector<FamilyMember> backward_orbit_family(const HomogeneousPair& F, const Rational& z0, int depth) {
  if (depth < 1) throw InvalidInput("depth must be at least 1");
  if (is_exceptional(F, projective(cd(z0.to_double(), 0.0)))) throw InvalidInput("z0 is exceptional");
  std::vector<FamilyMember> out;
  HomogeneousPair Fn = F;
  for (int n = 1; n <= depth; ++n) {
    if (n > 1) Fn = compose(F, Fn);
    const QPoly p = trimmed(Fn.f2() - Fn.f1() * QPoly{z0});
    if (degree(p) < Fn.degree()) throw InvalidInput("infinity lies in the backward orbit");
    out.push_back({n, "phi^-" + std::to_string(n) + "(" + z0.str() + ")", squarefree_part(p)});
  }
  return out;
}

PseudoEquiTable pseudo_equi_sequence(const HomogeneousPair& F, const std::vector<FamilyMember>& family,
                                     const std::vector<Place>& places, double tol, const AlgebraicHeightOptions& hopts) {
  PseudoEquiTable t;
  for (const auto& m : family) {
    if (degree(trimmed(m.polynomial)) < 2) throw InvalidInput("family member " + m.label + " has fewer than two points");
    const AlgebraicPoint z(m.polynomial);
    const auto e = adelic_pair_energy(F, z, tol, hopts);
    const std::size_t n = static_cast<size_t>(z.degree());
    const double nn = static_cast<double>(n) * (static_cast<double>(n) - 1);
    PseudoEquiSummary s{m.index, m.label, n, e.g_n, e.g_error, e.two_h, e.h_error};
    t.summary.push_back(s);
    if (places.empty()) {
      for (const auto& b : e.breakdown) t.rows.push_back({m.index, n, b.label, b.value, e.g_error});
      continue;
    }
    for (const auto& v : places) {
      const std::string label = v.label();
      const auto it = std::find_if(e.breakdown.begin(), e.breakdown.end(), [&](const auto& b) { return b.label == label; });
      double g = 0.0;
      if (it != e.breakdown.end()) {
        g = it->value;
      } else {
        // Good reduction: only the discriminant contributes.
        g = -log_abs_value(v, discriminant_quotient(z.minpoly())) / nn;
      }
      t.rows.push_back({m.index, n, label, g, e.g_error});
    }
  }
  return t;
}

ComparisonReport measure_comparison(const DiscreteMeasure& mu, int k_max, int bins) {
  check_comparison_args(mu, k_max, bins);
  std::vector<double> radial(static_cast<size_t>(bins), 0.0);
  radial[static_cast<size_t>(std::min(bins - 1, bins / 2))] = 1.0;
  if (bins % 2 == 0) {
    // |z| = 1 sits on a bin edge; split it.
    radial[static_cast<size_t>(bins / 2)] = 0.5;
    radial[static_cast<size_t>(bins / 2 - 1)] = 0.5;
  }
  return compare(mu, std::vector<cd>(static_cast<size_t>(k_max), cd(0)), radial,
                 std::vector<double>(static_cast<size_t>(bins), 1.0 / bins), k_max, bins);
}

ComparisonReport measure_comparison(const DiscreteMeasure& mu, const DiscreteMeasure& reference, int k_max, int bins) {
  check_comparison_args(mu, k_max, bins);
  reference.validate();
  return compare(mu, measure_moments(reference, k_max), radial_histogram(reference, bins),
                 angular_histogram(reference, bins), k_max, bins);
}

}  // namespace dyncap
