#pragma once

// Homogeneous transfinite diameters d0_n of filled Julia sets, from explicit
// point configurations, and the determinant identity for the resultant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncap/greens.hpp"

namespace dyncap {

/// z0 w1 - z1 w0.
template <typename Scalar>
Scalar wedge(const Vec2<Scalar>& z, const Vec2<Scalar>& w) {
  return z[0] * w[1] - z[1] * w[0];
}

enum class Strategy { RootsOfUnity, ResidueClasses, RandomRestartAscent, Explicit };
const char* to_string(Strategy s);
/// "roots-of-unity", "residue-classes", "random-restart-ascent".
Strategy parse_strategy(const std::string& s);

struct ConfigurationReport {
  std::size_t n = 0;
  Place place = Place::archimedean();
  Strategy strategy = Strategy::RootsOfUnity;
  std::vector<Vec2c> points;
  /// Exact points (residue classes only).
  std::vector<Vec2q> exact_points;
  double log_pair_product = 0.0;  ///< sum over i != j of log|z_i ^ z_j|_v
  double d0n = 0.0;               ///< exp(log_pair_product / (n(n-1)))
  double target = 0.0;            ///< |Res F|_v^(-1/(d(d-1)))
  /// Largest certified upper bound on H(z_i); all are <= membership_tol.
  double max_height = 0.0;
  double membership_tol = 1e-9;
};

struct TdiamOptions {
  std::uint64_t seed = 0;
  int restarts = 16;
  int sweeps = 200;
  double radius_start = 0.3;
  double radius_end = 1e-4;
  double membership_tol = 1e-9;
  unsigned threads = 0;
};

/// A configuration in K_{F,v} and its d0_n value, a lower bound for
/// d0_n(K). Roots of unity are scaled onto K along their lines;
/// residue classes need a finite place of good reduction with p >= n;
/// the ascent runs at the archimedean place. InvalidInput otherwise.
ConfigurationReport tdiam_estimate(const HomogeneousPair& F, const Place& place, std::size_t n, Strategy strategy,
                                   const TdiamOptions& opts = {});

/// d0_n of a given configuration. Every point must be certified inside
/// K_{F,v} within membership_tol (NumericalFailure otherwise); duplicates
/// are rejected with InvalidInput.
ConfigurationReport evaluate_configuration(const HomogeneousPair& F, const Place& place, const std::vector<Vec2q>& points,
                                           double membership_tol = 1e-9);
/// Archimedean version for complex lifts.
ConfigurationReport evaluate_configuration(const HomogeneousPair& F, const std::vector<Vec2c>& points,
                                           double membership_tol = 1e-9);

struct MonotonicityTrace {
  std::vector<ConfigurationReport> reports;  ///< n = 2..n_max
  /// Indices i where reports[i].d0n > reports[i-1].d0n.
  std::vector<std::size_t> violations;
};

MonotonicityTrace tdiam_monotonicity_trace(const HomogeneousPair& F, const Place& place, std::size_t n_max,
                                           Strategy strategy, const TdiamOptions& opts = {});

struct DetCheck {
  int t = 0;
  Rational det_abs;
  Rational res_power;  ///< |Res F|^(t(t+1)/2)
  bool equal = false;
};

/// ResourceLimit when (t+1) d exceeds max_size.
DetCheck det_identity_check(const HomogeneousPair& F, int t, int max_size = 40);

struct PlaceCapacity {
  Place place = Place::archimedean();
  double target_log = 0.0;  ///< log d0_inf = -log|Res F|_v / (d(d-1))
  std::optional<double> estimate_log;
};

struct AdelicTdiamSum {
  std::vector<PlaceCapacity> places;
  double target_sum = 0.0;
  /// The sum of targets vanishes identically; checked as an exact identity
  /// in the exponents of log p.
  bool exact_zero = false;
  double estimate_sum = 0.0;  ///< over places with an estimate
};

/// Places are the archimedean one and the primes of Res F. Estimates use
/// roots of unity archimedeanly and residue classes at good places (when
/// p >= n).
AdelicTdiamSum adelic_tdiam_sum(const HomogeneousPair& F, std::size_t n = 8, const TdiamOptions& opts = {});

}  // namespace dyncap
