#pragma once

// The dynamical Arakelov Green's function
//   g(z, w) = -log|z ^ w|_v + H(z) + H(w) + log c_v(F),
//   c_v(F) = |Res F|_v^(-1/(d(d-1))),
// its good-reduction closed form, pair energies and the pullback identity.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "dyncap/dynamics.hpp"
#include "dyncap/localheights.hpp"

namespace dyncap {

struct GreenValue {
  double value = 0.0;
  bool infinite = false;  ///< on the diagonal
  double error_bound = 0.0;
  /// Set by green_good_reduction: value = exact_multiple * log p.
  std::optional<long> exact_multiple;
  static GreenValue plus_infinity() {
    GreenValue g;
    g.infinite = true;
    g.value = HUGE_VAL;
    return g;
  }
};

/// log c_v(F) = -log|Res F|_v / (d(d-1)), from the exact resultant of F.
double log_green_constant(const HomogeneousPair& F, const Place& place);

/// g_{phi,v} for a fixed map and place; caches the local-height evaluator.
class Green {
 public:
  Green(HomogeneousPair F, Place place);

  [[nodiscard]] const LocalHeight& height() const { return H_; }
  [[nodiscard]] double log_constant() const { return log_c_; }

  /// Lift-independent; each height term is evaluated to tol/4.
  [[nodiscard]] GreenValue operator()(const Vec2q& z, const Vec2q& w, double tol = 1e-12) const;
  [[nodiscard]] GreenValue operator()(const Vec2c& z, const Vec2c& w, double tol = 1e-12) const;

 private:
  LocalHeight H_;
  double log_c_;
};

GreenValue green(const HomogeneousPair& F, const Place& place, const Vec2q& z, const Vec2q& w, double tol = 1e-12);
GreenValue green(const HomogeneousPair& F, const Vec2c& z, const Vec2c& w, double tol = 1e-12);

/// -log|z - w|_p + log+|z|_p + log+|w|_p for projective rational points, as
/// an exact multiple of log p. The caller certifies good reduction at p.
GreenValue green_good_reduction(const Integer& p, const Vec2q& z, const Vec2q& w);

/// |g(phi(z), w) - sum_i m_i g(z, w_i)| over the preimages w_i of w, at the
/// archimedean place. DomainError when z = w or phi(z) = w.
double invariance_residual(const HomogeneousPair& F, const Vec2c& z, const Vec2c& w, double tol = 1e-12);

struct EnergyReport {
  std::size_t n = 0;
  double pair_sum = 0.0;    ///< sum over i != j of g(z_i, z_j)
  double normalized = 0.0;  ///< pair_sum / (n (n-1))
  double error_bound = 0.0;  ///< on `normalized`
};

/// DomainError on repeated points, InvalidInput for fewer than two.
EnergyReport pair_energy(const Green& g, const std::vector<Vec2q>& points, double tol = 1e-12, unsigned threads = 0);
EnergyReport pair_energy(const Green& g, const std::vector<Vec2c>& points, double tol = 1e-12, unsigned threads = 0);

struct MinimizeOptions {
  int restarts = 8;
  int sweeps = 200;
  double radius_start = 0.3;
  double radius_end = 1e-4;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct MinimizationStep {
  std::size_t n = 0;
  EnergyReport best;
  std::vector<Vec2c> points;
  /// best.normalized fell below the previous n (the true minima are
  /// non-decreasing; a flag means optimizer noise, not a failed identity).
  bool violation = false;
};

/// Approximate minima of the normalized archimedean energy for n = 2..n_max
/// by random-restart coordinate descent. Only upper bounds on the true
/// minima are produced.
std::vector<MinimizationStep> energy_minimization_trace(const Green& g, std::size_t n_max, const MinimizeOptions& opts = {});

}  // namespace dyncap
