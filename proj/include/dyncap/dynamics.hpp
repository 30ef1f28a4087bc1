#pragma once

// Forward and backward dynamics on P^1(C): preimages with multiplicities,
// exceptional points, and backward-iteration samples of the canonical measure.

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "dyncap/homforms.hpp"
#include "dyncap/roots.hpp"

namespace dyncap {

/// Chart representative of a projective point: the coordinate of larger
/// modulus is scaled to exactly 1. Throws DomainError at (0,0).
Vec2c normalized(const Vec2c& z);
/// [1 : z].
inline Vec2c projective(std::complex<double> z) { return {1.0, z}; }
inline Vec2c infinity_point() { return {0.0, 1.0}; }
/// Affine coordinate z1/z0, or nullopt at infinity.
std::optional<std::complex<double>> affine(const Vec2c& z);
/// |z ^ w| / (|z|_2 |w|_2), in [0, 1].
double chordal_distance(const Vec2c& z, const Vec2c& w);

struct PreimagePoint {
  Vec2c point;  ///< normalized
  int multiplicity = 1;
};

struct PreimageSet {
  Vec2c target;
  std::vector<PreimagePoint> points;
  /// Largest chordal distance between phi(z) and the target.
  double max_residual = 0.0;
  [[nodiscard]] int total_multiplicity() const;
};

struct PreimageOptions {
  /// Roots within this chordal distance form one point.
  double cluster_radius = 1e-8;
  double residual_tol = 1e-8;
  RootOptions roots;
};

/// Solves w1 F1(z) - w0 F2(z) = 0. Roots at 0 and infinity are read off the
/// exact zero coefficients; the others are found in the u-chart and polished
/// in whichever chart keeps the coordinate in the unit disk.
PreimageSet preimages(const HomogeneousPair& F, const Vec2c& w, const PreimageOptions& opts = {});
/// Rational target: multiplicities come from an exact squarefree
/// decomposition instead of clustering.
PreimageSet preimages(const HomogeneousPair& F, const Vec2q& w, const PreimageOptions& opts = {});

/// True when {z} together with phi^-1(z) has at most two points and is
/// closed under phi and phi^-1 (checked two levels deep).
bool is_exceptional(const HomogeneousPair& F, const Vec2c& z, double tol = 1e-9);

struct Atom {
  Vec2c point;
  double weight = 0.0;
};

struct DiscreteMeasure {
  std::vector<Atom> atoms;
  [[nodiscard]] double total_weight() const;
  /// Throws InvalidInput unless weights are positive and sum to 1 within 1e-12.
  void validate() const;
};

/// SplitMix64 finalizer applied to (seed, index); the per-sample stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct SamplingOptions {
  int depth = 20;
  std::size_t samples = 4096;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  PreimageOptions preimage;
};

/// Empirical measure of the endpoints of independent random backward orbits
/// (each step picks a preimage with probability m/d). depth 0 gives the
/// point mass at z0. Exceptional z0 is rejected with InvalidInput.
DiscreteMeasure sample_canonical_measure(const HomogeneousPair& F, const Vec2c& z0, const SamplingOptions& opts);

/// Image measure phi_* mu.
DiscreteMeasure pushforward(const HomogeneousPair& F, const DiscreteMeasure& mu);

/// Coordinates of the point on the unit sphere under stereographic projection.
std::array<double, 3> sphere_point(const Vec2c& z);

struct MomentTest {
  std::array<double, 3> difference{};  ///< of the sphere-coordinate means
  std::array<double, 3> sigma{};       ///< standard error of the difference
  double sigmas = 3.0;
  double floor = 1e-9;
  bool passed = false;
};

/// Two-sample test on the means of the sphere coordinates:
/// |difference| <= sigmas * sigma + floor in every coordinate.
MomentTest moment_test(const DiscreteMeasure& a, const DiscreteMeasure& b, double sigmas = 3.0);

/// Compares phi_* of a depth-n sample with an independent depth-(n-1) sample.
MomentTest pushforward_moment_test(const HomogeneousPair& F, const Vec2c& z0, const SamplingOptions& opts);

/// CSV with header re,im,weight; infinity is written as inf,0.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, int digits = 15);
DiscreteMeasure read_measure_csv(std::istream& in);

}  // namespace dyncap
