#pragma once

// Global heights over Q: the Weil height, the canonical height of rational
// and algebraic points, the pairing identity and the adelic pair energy of a
// Galois orbit.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dyncap/greens.hpp"

namespace dyncap {

/// An algebraic number given by its defining polynomial over Q, stored
/// primitive over Z with positive leading coefficient, together with its
/// complex embeddings.
class AlgebraicPoint {
 public:
  /// Throws InvalidInput for constant or zero polynomials.
  explicit AlgebraicPoint(const QPoly& minpoly);
  static AlgebraicPoint rational(const Rational& x);

  [[nodiscard]] const QPoly& minpoly() const { return minpoly_; }
  [[nodiscard]] int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
  [[nodiscard]] const std::vector<std::complex<double>>& roots() const { return roots_; }
  /// Largest relative difference between the minpoly coefficients and those
  /// rebuilt from the roots.
  [[nodiscard]] double symmetric_function_error() const;

 private:
  QPoly minpoly_;
  std::vector<std::complex<double>> roots_;
};

/// log max(|p|, |q|) for p/q in lowest terms.
double weil_height(const Rational& x);
/// Projective height of [z0 : z1].
double weil_height(const Vec2q& z);

struct MahlerHeight {
  double value = 0.0;
  double archimedean = 0.0;  ///< (1/N) sum log+|alpha_i|
  double finite = 0.0;       ///< (1/N) log|a_N|
  double root_error = 0.0;   ///< allowance for the numerical roots
};
/// (1/N)(log|a_N| + sum log+|alpha_i|) for the primitive part of p.
MahlerHeight mahler_height(const QPoly& p);
double weil_height(const AlgebraicPoint& z);

/// Archimedean place plus every prime dividing Res(G) or lambda for the
/// cleared pair G = lambda F. Outside this set H_{F,p} = log||.||_p.
std::vector<Place> effective_places(const HomogeneousPair& F);

/// sum over effective places of C_v / (d-1): a bound on |hhat - h|.
double height_difference_bound(const HomogeneousPair& F);

struct HeightContribution {
  std::string label;
  double value = 0.0;
};

struct GlobalHeightResult {
  double value = 0.0;
  double error_bound = 0.0;
  std::vector<HeightContribution> breakdown;  ///< sums to value
  int iterations = 0;
  /// Pushforward stopped early at the coefficient-size cap.
  bool capped = false;
};

/// sum_v H_{F,v} of the coprime integral lift.
GlobalHeightResult canonical_height_rational(const HomogeneousPair& F, const Vec2q& z, double tol = 1e-12);
inline GlobalHeightResult canonical_height_rational(const HomogeneousPair& F, const Rational& z, double tol = 1e-12) {
  return canonical_height_rational(F, Vec2q(Rational(1), z), tol);
}

struct AlgebraicHeightOptions {
  int n_max = 12;
  double tol = 1e-12;
  /// Stop pushing forward once a coefficient exceeds this many bits.
  long max_coefficient_bits = 1000;
};

/// h(phi^n(z)) / d^n with the image minpoly pushed forward by exact
/// resultants, error B / d^n plus the root allowance.
GlobalHeightResult canonical_height_algebraic(const HomogeneousPair& F, const AlgebraicPoint& z,
                                              const AlgebraicHeightOptions& opts = {});

/// Minimal polynomial (primitive) carrying the images phi(alpha) of the
/// roots of p, with multiplicity; roots of p that map to infinity are
/// excluded and counted in `to_infinity`.
QPoly pushforward_polynomial(const HomogeneousPair& F, const QPoly& p, int* to_infinity = nullptr);

/// |sum_v g_v(z, w) - hhat(z) - hhat(w)| over the effective places and the
/// primes of the wedge of the coprime lifts. DomainError on the diagonal.
double pairing_identity_residual(const HomogeneousPair& F, const Vec2q& z, const Vec2q& w, double tol = 1e-12);

struct AdelicEnergy {
  double g_n = 0.0;    ///< (1/(N(N-1))) sum_v sum_{i != j} g_v(z_i, z_j)
  double two_h = 0.0;  ///< 2 hhat(z)
  double g_error = 0.0;
  double h_error = 0.0;
  double archimedean = 0.0;  ///< normalized archimedean part
  /// Normalized per-place parts: "arch", each bad prime "p:N", and "good"
  /// for all remaining primes together. They sum to g_n.
  std::vector<HeightContribution> breakdown;
  [[nodiscard]] double residual() const { return std::abs(g_n - two_h); }
};

/// InvalidInput for fewer than two conjugates, DomainError for repeated
/// ones. Finite places are summed exactly through the discriminant and
/// Gauss norms of resultants.
AdelicEnergy adelic_pair_energy(const HomogeneousPair& F, const AlgebraicPoint& z, double tol = 1e-12,
                                const AlgebraicHeightOptions& hopts = {});

enum class OrbitKind { Preperiodic, Wandering, Undetermined };
const char* to_string(OrbitKind k);

struct OrbitReport {
  OrbitKind kind = OrbitKind::Undetermined;
  int tail = 0;    ///< steps before the cycle (Preperiodic)
  int period = 0;  ///< cycle length (Preperiodic)
  int steps = 0;
};

/// Exact forward orbit with cycle detection. Wandering is certified once
/// h(phi^k(z)) exceeds the height-difference bound.
OrbitReport classify_orbit(const HomogeneousPair& F, const Vec2q& z, int max_steps = 10000);

}  // namespace dyncap
