#pragma once

// Homogeneous local dynamical heights H_{F,v}(z) = lim d^-n log ||F^(n)(z)||_v
// with a certified tail bound, the Call-Silverman charts, and membership in
// the filled Julia set K_{F,v} = { H_{F,v} <= 0 }.

#include <vector>

#include "dyncap/homforms.hpp"

namespace dyncap {

struct HeightOptions {
  double tol = 1e-12;
  /// Iterate at least this many steps even when the tail bound is already met.
  int min_iterations = 0;
  int max_iterations = 5000;
  /// Keep the partial limits H_0, ..., H_n.
  bool record_trajectory = false;
};

struct LocalHeightEstimate {
  double value = 0.0;
  /// Certified tail bound C / (d^n (d-1)); zero for closed forms.
  double error_bound = 0.0;
  /// Floating-point evaluation allowance (archimedean only).
  double roundoff = 0.0;
  int iterations = 0;
  /// The unit-polydisk closed form applied (good reduction at a finite place).
  bool closed_form = false;
  std::vector<double> trajectory;

  [[nodiscard]] double total_error() const { return error_bound + roundoff; }
};

/// Evaluator of H_{F,v} for a fixed map and place. Computes the place bounds
/// once; evaluation is const and thread-safe.
class LocalHeight {
 public:
  LocalHeight(HomogeneousPair F, Place place, const BoundsOptions& bounds = {});

  [[nodiscard]] const HomogeneousPair& map() const { return F_; }
  [[nodiscard]] const Place& place() const { return place_; }
  [[nodiscard]] const PlaceBounds& bounds() const { return bounds_; }
  [[nodiscard]] const ClearedPair& cleared() const { return cleared_; }

  /// Exact rational lift; valid at every place. Throws DomainError at (0,0).
  [[nodiscard]] LocalHeightEstimate operator()(const Vec2q& z, const HeightOptions& opts = {}) const;
  /// Complex lift; archimedean place only.
  [[nodiscard]] LocalHeightEstimate operator()(const Vec2c& z, const HeightOptions& opts = {}) const;

  /// Iterations needed so that C / (d^n (d-1)) <= tol.
  [[nodiscard]] int iterations_for(double tol) const;

 private:
  [[nodiscard]] LocalHeightEstimate finite_height(const Vec2q& z, const HeightOptions& opts) const;
  [[nodiscard]] LocalHeightEstimate arch_height(const Vec2c& unit, double log_norm, const HeightOptions& opts) const;

  HomogeneousPair F_;
  Place place_;
  PlaceBounds bounds_;
  ClearedPair cleared_;
  double coeff_sum_ = 0.0;
  long res_valuation_ = 0;
};

LocalHeightEstimate local_height(const HomogeneousPair& F, const Place& place, const Vec2q& z, double tol = 1e-12);
LocalHeightEstimate local_height(const HomogeneousPair& F, const Vec2c& z, double tol = 1e-12);

struct LHReport {
  double lh1 = 0, lh1_bound = 0;  ///< |H(z) - log||z||| against C/(d-1)
  double lh2 = 0, lh2_bound = 0;  ///< |H(F(z)) - d H(z)|
  double lh3 = 0, lh3_bound = 0;  ///< |H(cz) - H(z) - log|c|_v|
  [[nodiscard]] bool ok() const { return lh1 <= lh1_bound && lh2 <= lh2_bound && lh3 <= lh3_bound; }
};

LHReport check_lh_properties(const LocalHeight& H, const Vec2q& z, const Rational& c, double tol = 1e-12);
LHReport check_lh_properties(const LocalHeight& H, const Vec2c& z, std::complex<double> c, double tol = 1e-12);

enum class Verdict { Inside, Outside, Undetermined };
const char* to_string(Verdict v);

struct JuliaMembership {
  Verdict verdict = Verdict::Undetermined;
  LocalHeightEstimate height;
};

/// Inside when value + error <= tol, outside when value - error > 0.
JuliaMembership julia_membership(const LocalHeight& H, const Vec2q& z, double tol = 1e-12);
JuliaMembership julia_membership(const LocalHeight& H, const Vec2c& z, double tol = 1e-12);

/// h_{F,v,(inf)}(z) = H(1, T(z)) for a projective point with z0 != 0.
LocalHeightEstimate cs_height_infty(const LocalHeight& H, const Vec2q& z, double tol = 1e-12);
LocalHeightEstimate cs_height_infty(const LocalHeight& H, const Vec2c& z, double tol = 1e-12);
/// h_{F,v,(0)}(z) = H(U(z), 1) for a projective point with z1 != 0.
LocalHeightEstimate cs_height_zero(const LocalHeight& H, const Vec2q& z, double tol = 1e-12);
LocalHeightEstimate cs_height_zero(const LocalHeight& H, const Vec2c& z, double tol = 1e-12);

}  // namespace dyncap
