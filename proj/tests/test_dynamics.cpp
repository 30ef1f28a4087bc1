#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dyncap/dynamics.hpp"
#include "dyncap/errors.hpp"

using namespace dyncap;
using cd = std::complex<double>;

namespace {
QPoly P(std::initializer_list<long> c) {
  QPoly out;
  for (long v : c) out.emplace_back(v);
  return out;
}
const HomogeneousPair kSquare(P({1, 0, 0}), P({0, 0, 1}));
const HomogeneousPair kSquarePlusOne(P({1, 0, 0}), P({1, 0, 1}));
const HomogeneousPair kInverseSquare(P({0, 0, 1}), P({1, 0, 0}));  // 1/z^2
const HomogeneousPair kQuadratic(P({1, 0, 0}), P({0, -2, 1}));     // z^2 - 2z

bool has_point(const PreimageSet& s, const Vec2c& z, int m, double tol = 1e-12) {
  for (const auto& p : s.points)
    if (chordal_distance(p.point, z) <= tol && p.multiplicity == m) return true;
  return false;
}

CPoly from_roots(const std::vector<cd>& roots) {
  CPoly p{1.0};
  for (const auto& r : roots) p = p * CPoly{-r, 1.0};
  return p;
}
}  // namespace

TEST_CASE("polynomial_roots recovers planted roots") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int n = 1; n <= 20; ++n) {
    std::vector<cd> planted;
    for (int k = 0; k < n; ++k) planted.emplace_back(g(rng), g(rng));
    auto found = polynomial_roots(from_roots(planted));
    REQUIRE(found.size() == planted.size());
    for (const auto& r : planted) {
      double best = 1e300;
      for (const auto& f : found) best = std::min(best, std::abs(f - r));
      CHECK(best <= 1e-8 * (1 + std::abs(r)));
    }
  }
  // Multiple and zero roots.
  const auto m = polynomial_roots(from_roots({1.0, 1.0, 1.0, -2.0, 0.0}));
  int near_one = 0, zeros = 0;
  for (const auto& r : m) {
    if (std::abs(r - 1.0) < 1e-4) ++near_one;
    if (r == 0.0) ++zeros;
  }
  CHECK(near_one == 3);
  CHECK(zeros == 1);
  CHECK_THROWS_AS(polynomial_roots(CPoly{0.0}), InvalidInput);
}

TEST_CASE("preimages examples") {
  for (bool exact : {false, true}) {
    const auto four = exact ? preimages(kSquare, Vec2q(Rational(1), Rational(4))) : preimages(kSquare, projective(4.0));
    CHECK(four.total_multiplicity() == 2);
    CHECK(has_point(four, projective(2.0), 1));
    CHECK(has_point(four, projective(-2.0), 1));
    const auto zero = exact ? preimages(kSquare, Vec2q(Rational(1), Rational(0))) : preimages(kSquare, projective(0.0));
    REQUIRE(zero.points.size() == 1);
    CHECK(has_point(zero, projective(0.0), 2));
    const auto one = exact ? preimages(kSquarePlusOne, Vec2q(Rational(1), Rational(1)))
                           : preimages(kSquarePlusOne, projective(1.0));
    REQUIRE(one.points.size() == 1);
    CHECK(has_point(one, projective(0.0), 2));
  }
  CHECK(has_point(preimages(kSquare, infinity_point()), infinity_point(), 2));
  CHECK(has_point(preimages(kInverseSquare, projective(0.0)), infinity_point(), 2));
}

TEST_CASE("critical values give clustered double roots") {
  // z^2 - 2z has its critical value -1 at z = 1.
  const auto s = preimages(kQuadratic, projective(-1.0));
  REQUIRE(s.points.size() == 1);
  CHECK(has_point(s, projective(1.0), 2, 1e-7));
  const auto q = preimages(kQuadratic, Vec2q(Rational(1), Rational(-1)));
  CHECK(has_point(q, projective(1.0), 2, 1e-14));
  // Off the critical value the two roots separate.
  CHECK(preimages(kQuadratic, projective(cd(-1.0, 1e-3))).points.size() == 2);
}

TEST_CASE("preimages of random maps map back with multiplicity sum d") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> coef(-5, 5);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 4;
    QPoly a(static_cast<size_t>(d + 1)), b(static_cast<size_t>(d + 1));
    for (auto& c : a) c = Rational(coef(rng));
    for (auto& c : b) c = Rational(coef(rng));
    if (resultant(a, b).is_zero()) continue;
    const HomogeneousPair F(a, b);
    for (int k = 0; k < 5; ++k) {
      const Vec2c w = projective(cd(g(rng), g(rng)));
      const auto s = preimages(F, w);
      CHECK(s.total_multiplicity() == d);
      for (const auto& p : s.points) CHECK(chordal_distance(F.evaluate(p.point), w) <= 1e-8);
      const Vec2q wq(Rational(1), Rational(coef(rng)));
      const auto e = preimages(F, wq);
      CHECK(e.total_multiplicity() == d);
    }
  }
}

TEST_CASE("is_exceptional examples") {
  CHECK(is_exceptional(kSquare, projective(0.0)));
  CHECK(is_exceptional(kSquare, infinity_point()));
  CHECK_FALSE(is_exceptional(kSquare, projective(1.0)));
  CHECK_FALSE(is_exceptional(kSquare, projective(2.0)));
  CHECK(is_exceptional(kSquarePlusOne, infinity_point()));
  CHECK_FALSE(is_exceptional(kSquarePlusOne, projective(0.0)));
  CHECK(is_exceptional(kInverseSquare, projective(0.0)));
  CHECK(is_exceptional(kInverseSquare, infinity_point()));
  CHECK_FALSE(is_exceptional(kInverseSquare, projective(1.0)));
}

TEST_CASE("canonical measure sampling") {
  SamplingOptions opts;
  opts.depth = 0;
  opts.samples = 16;
  const auto mass = sample_canonical_measure(kSquare, projective(2.0), opts);
  REQUIRE(mass.atoms.size() == 1);
  CHECK(mass.atoms[0].weight == 1.0);
  CHECK(chordal_distance(mass.atoms[0].point, projective(2.0)) == 0.0);
  CHECK_THROWS_AS(sample_canonical_measure(kSquare, projective(0.0), opts), InvalidInput);

  opts.depth = 20;
  opts.samples = 4096;
  opts.seed = 1234;
  const auto mu = sample_canonical_measure(kSquare, projective(2.0), opts);
  mu.validate();
  double mean = 0.0;
  for (const auto& a : mu.atoms) mean += a.weight * std::fabs(std::log(std::abs(*affine(a.point))));
  CHECK(mean <= 1e-3);
}

TEST_CASE("sampling is reproducible across thread counts") {
  SamplingOptions opts;
  opts.depth = 12;
  opts.samples = 300;
  opts.seed = 77;
  opts.threads = 1;
  const auto a = sample_canonical_measure(kSquarePlusOne, projective(2.0), opts);
  opts.threads = 5;
  const auto b = sample_canonical_measure(kSquarePlusOne, projective(2.0), opts);
  std::ostringstream sa, sb;
  write_measure_csv(sa, a, 17);
  write_measure_csv(sb, b, 17);
  CHECK(sa.str() == sb.str());
  opts.seed = 78;
  std::ostringstream sc;
  write_measure_csv(sc, sample_canonical_measure(kSquarePlusOne, projective(2.0), opts), 17);
  CHECK(sa.str() != sc.str());
}

TEST_CASE("pushforward moment test") {
  SamplingOptions opts;
  opts.depth = 10;
  opts.samples = 2000;
  opts.seed = 3;
  for (const auto* F : {&kSquare, &kSquarePlusOne, &kQuadratic}) {
    const auto t = pushforward_moment_test(*F, projective(cd(0.3, 0.2)), opts);
    CHECK(t.passed);
  }
  // A moved measure is detected.
  DiscreteMeasure circle, shifted;
  for (int k = 0; k < 500; ++k) {
    const cd z = std::polar(1.0, 2 * M_PI * k / 500);
    circle.atoms.push_back({projective(z), 1.0 / 500});
    shifted.atoms.push_back({projective(z * 1.5), 1.0 / 500});
  }
  CHECK(moment_test(circle, circle).passed);
  CHECK_FALSE(moment_test(circle, shifted).passed);
}

TEST_CASE("measure CSV round trip") {
  DiscreteMeasure mu;
  mu.atoms = {{projective(cd(0.5, -2.0)), 0.25}, {infinity_point(), 0.5}, {Vec2c(cd(0.0, 2.0), 1.0), 0.25}};
  std::ostringstream out;
  write_measure_csv(out, mu);
  CHECK(out.str().find("inf,0,0.5\n") != std::string::npos);
  std::istringstream in(out.str());
  const auto back = read_measure_csv(in);
  REQUIRE(back.atoms.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(chordal_distance(back.atoms[i].point, mu.atoms[i].point) <= 1e-14);
    CHECK(back.atoms[i].weight == mu.atoms[i].weight);
  }
  back.validate();
  std::istringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_measure_csv(bad), InvalidInput);
}
