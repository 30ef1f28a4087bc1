#pragma once

// Equidistribution experiments: roots of unity against the circle, small
// Galois-stable families and their adelic energies, and comparisons of
// discrete measures.

#include <complex>
#include <string>
#include <vector>

#include "dyncap/dynamics.hpp"
#include "dyncap/globalheights.hpp"

namespace dyncap {

/// m_k = sum w_i z_i^k over atoms in the affine chart (atoms at infinity are
/// skipped), k = 1..k_max.
std::vector<std::complex<double>> measure_moments(const DiscreteMeasure& mu, int k_max);

struct MomentReport {
  int k_max = 0;
  std::vector<std::complex<double>> moments;
  std::vector<std::complex<double>> reference;
  [[nodiscard]] double max_difference() const;
};

struct BiluReport {
  std::size_t atoms = 0;
  MomentReport moments;  ///< against the circle, whose moments vanish
  EnergyReport energy;   ///< archimedean pair energy for z^2
};

/// Roots of x^n - 1, or of the n-th cyclotomic polynomial, with equal weights.
DiscreteMeasure roots_of_unity_measure(std::size_t n, bool primitive_only);
BiluReport bilu_experiment(std::size_t n, bool cyclotomic, int k_max = 8, unsigned threads = 0);

/// A Galois-stable set given by a squarefree polynomial.
struct FamilyMember {
  int index = 0;
  std::string label;
  QPoly polynomial;
};

/// Phi_{2^m} = x^(2^(m-1)) + 1.
std::vector<FamilyMember> cyclotomic_family(int m_min, int m_max);
/// x^n - 1.
std::vector<FamilyMember> roots_of_unity_family(const std::vector<int>& ns);
/// phi^(-n)(z0) for n = 1..depth, as the squarefree part of the numerator of
/// phi^(n)(z) - z0. InvalidInput for exceptional z0 or when a preimage is
/// infinity.
std::vector<FamilyMember> backward_orbit_family(const HomogeneousPair& F, const Rational& z0, int depth);

struct PseudoEquiRow {
  int index = 0;
  std::size_t size = 0;
  std::string place;  ///< "arch", "p:N", or "good" for the untabulated primes
  double g = 0.0;
  double g_error = 0.0;
};

struct PseudoEquiSummary {
  int index = 0;
  std::string label;
  std::size_t size = 0;
  double global = 0.0;  ///< sum over all places
  double g_error = 0.0;
  double two_h = 0.0;
  double h_error = 0.0;
  [[nodiscard]] double residual() const { return std::abs(global - two_h); }
};

struct PseudoEquiTable {
  std::vector<PseudoEquiRow> rows;
  std::vector<PseudoEquiSummary> summary;
};

/// Normalized energies g_{v,n} at the requested places for each member, with
/// the global sum and 2 hhat. Members with fewer than two points are
/// rejected with InvalidInput; repeated points with DomainError.
PseudoEquiTable pseudo_equi_sequence(const HomogeneousPair& F, const std::vector<FamilyMember>& family,
                                     const std::vector<Place>& places, double tol = 1e-12,
                                     const AlgebraicHeightOptions& hopts = {});

struct ComparisonReport {
  MomentReport moments;
  int bins = 0;
  /// Histograms of (2/pi) atan|z| and of arg z.
  std::vector<double> radial, radial_reference;
  std::vector<double> angular, angular_reference;
  /// Half the l1 distance between the histograms.
  double radial_discrepancy = 0.0;
  double angular_discrepancy = 0.0;
};

/// Against the uniform measure on the unit circle.
ComparisonReport measure_comparison(const DiscreteMeasure& mu, int k_max = 8, int bins = 15);
/// Against another discrete measure.
ComparisonReport measure_comparison(const DiscreteMeasure& mu, const DiscreteMeasure& reference, int k_max = 8,
                                    int bins = 15);

}  // namespace dyncap
