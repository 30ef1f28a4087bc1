#include <cmath>
#include <random>

#include "doctest.h"
#include "dyncap/capacities.hpp"
#include "dyncap/errors.hpp"

using namespace dyncap;
using cd = std::complex<double>;

namespace {
QPoly P(std::initializer_list<long> c) {
  QPoly out;
  for (long v : c) out.emplace_back(v);
  return out;
}
Vec2q V(long a, long b) { return {Rational(a), Rational(b)}; }

const HomogeneousPair kSquare(P({1, 0, 0}), P({0, 0, 1}));
const HomogeneousPair kTwo(P({2, 0, 0}), P({0, 0, 1}));

HomogeneousPair random_map(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<long> c(-5, 5);
  for (;;) {
    QPoly a, b;
    for (int i = 0; i <= d; ++i) {
      a.emplace_back(c(rng));
      b.emplace_back(c(rng));
    }
    if (a.front().is_zero() && b.front().is_zero()) continue;
    if (resultant(a, b).is_zero()) continue;
    return HomogeneousPair(a, b);
  }
}
}  // namespace

TEST_CASE("wedge examples") {
  CHECK(wedge(V(1, 0), V(0, 1)) == Rational(1));
  CHECK(wedge(V(2, 3), V(4, 6)) == Rational(0));
  CHECK(wedge(V(1, 2), V(3, 5)) == Rational(-1));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long> c(-50, 50);
  for (int i = 0; i < 50; ++i) {
    const Vec2q z = V(c(rng), c(rng)), w = V(c(rng), c(rng));
    CHECK(wedge(z, w) == -wedge(w, z));
  }
}

TEST_CASE("roots of unity for z^2") {
  for (std::size_t n : {2, 3, 8, 17, 64}) {
    const auto r = tdiam_estimate(kSquare, Place::archimedean(), n, Strategy::RootsOfUnity);
    CHECK(std::fabs(r.d0n - std::pow(double(n), 1.0 / (n - 1))) <= 1e-9);
    CHECK(r.target == 1.0);
    CHECK(r.max_height <= r.membership_tol);
    CHECK(r.points.size() == n);
  }
  const auto r8 = tdiam_estimate(kSquare, Place::archimedean(), 8, Strategy::RootsOfUnity);
  CHECK(r8.d0n == doctest::Approx(1.3459).epsilon(1e-4));
}

TEST_CASE("explicit configurations") {
  const auto r = evaluate_configuration(kSquare, Place::archimedean(), {V(1, 0), V(0, 1)});
  CHECK(r.d0n == 1.0);
  CHECK_THROWS_AS((void)evaluate_configuration(kSquare, Place::archimedean(), {V(1, 0), V(-1, 0)}), InvalidInput);
  CHECK_THROWS_AS((void)evaluate_configuration(kSquare, Place::archimedean(), {V(1, 0), V(1, 3)}), NumericalFailure);
  CHECK_THROWS_AS((void)evaluate_configuration(kSquare, Place::archimedean(), {V(1, 0)}), InvalidInput);
}

TEST_CASE("log pair product is invariant under unit scalars") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI);
  const auto base = tdiam_estimate(kSquare, Place::archimedean(), 12, Strategy::RootsOfUnity);
  auto pts = base.points;
  for (auto& z : pts) z *= std::polar(1.0, ang(rng));
  const auto r = evaluate_configuration(kSquare, pts);
  CHECK(std::fabs(r.log_pair_product - base.log_pair_product) <= 1e-11);

  std::vector<Vec2q> q;
  for (long j = 0; j < 5; ++j) q.push_back(V(1, j));
  const auto a = evaluate_configuration(kSquare, Place::finite(11), q);
  for (std::size_t j = 0; j < q.size(); ++j) {
    const Rational u(Integer(2 + long(j)), Integer(3 + long(j)));  // 11-adic unit
    q[j] = Vec2q(q[j][0] * u, q[j][1] * u);
  }
  CHECK(evaluate_configuration(kSquare, Place::finite(11), q).log_pair_product == a.log_pair_product);
}

TEST_CASE("residue classes") {
  const auto r = tdiam_estimate(kSquare, Place::finite(11), 5, Strategy::ResidueClasses);
  CHECK(r.d0n == 1.0);
  CHECK(r.target == 1.0);
  CHECK(r.exact_points[4] == V(1, 4));
  // Good reduction of 2x^2 at 3 and 5, with lambda a unit.
  CHECK(tdiam_estimate(kTwo, Place::finite(5), 5, Strategy::ResidueClasses).d0n == 1.0);
  // 9 (x^2, y^2): K is ||z||_3 <= 9 and both d0n and the target are 81.
  const HomogeneousPair nine(P({9, 0, 0}), P({0, 0, 9}));
  const auto s = tdiam_estimate(nine, Place::finite(3), 3, Strategy::ResidueClasses);
  CHECK(s.target == doctest::Approx(81.0).epsilon(1e-14));
  CHECK(s.d0n == doctest::Approx(81.0).epsilon(1e-14));
  CHECK(s.max_height <= 0.0);
  CHECK_THROWS_AS((void)tdiam_estimate(kSquare, Place::finite(3), 5, Strategy::ResidueClasses), InvalidInput);
  CHECK_THROWS_AS((void)tdiam_estimate(kTwo, Place::finite(2), 2, Strategy::ResidueClasses), InvalidInput);
  CHECK_THROWS_AS((void)tdiam_estimate(kSquare, Place::archimedean(), 5, Strategy::ResidueClasses), InvalidInput);
  CHECK_THROWS_AS((void)tdiam_estimate(kSquare, Place::finite(7), 5, Strategy::RootsOfUnity), InvalidInput);
  CHECK_THROWS_AS((void)tdiam_estimate(kSquare, Place::archimedean(), 1, Strategy::RootsOfUnity), InvalidInput);
}

TEST_CASE("monotonicity traces") {
  const auto t = tdiam_monotonicity_trace(kSquare, Place::archimedean(), 10, Strategy::RootsOfUnity);
  REQUIRE(t.reports.size() == 9);
  CHECK(t.violations.empty());
  for (std::size_t i = 1; i < t.reports.size(); ++i) CHECK(t.reports[i].d0n < t.reports[i - 1].d0n);
  const auto f = tdiam_monotonicity_trace(kSquare, Place::finite(13), 8, Strategy::ResidueClasses);
  CHECK(f.violations.empty());
  for (const auto& r : f.reports) CHECK(r.d0n == 1.0);
  CHECK(tdiam_monotonicity_trace(kSquare, Place::archimedean(), 2, Strategy::RootsOfUnity).reports.size() == 1);
}

TEST_CASE("roots of unity on other maps stay inside K") {
  const HomogeneousPair sq1(P({1, 0, 0}), P({1, 0, 1}));
  const auto r = tdiam_estimate(sq1, Place::archimedean(), 10, Strategy::RootsOfUnity);
  CHECK(r.max_height <= 1e-9);
  CHECK(r.d0n > 0.0);
  const auto two = tdiam_estimate(kTwo, Place::archimedean(), 10, Strategy::RootsOfUnity);
  CHECK(two.target == doctest::Approx(0.5));
  // K for 2x^2 is the polydisk |z0| <= 1/2, so the scaled roots give d0n(K_{x^2}) / 4.
  CHECK(two.d0n == doctest::Approx(std::pow(10.0, 1.0 / 9) / 4).epsilon(1e-12));
}

TEST_CASE("random-restart ascent") {
  TdiamOptions o;
  o.seed = 11;
  o.restarts = 8;
  o.sweeps = 120;
  const HomogeneousPair basilica(P({1, 0, 0}), P({-1, 0, 1}));
  const HomogeneousPair sq1(P({1, 0, 0}), P({1, 0, 1}));
  for (const auto* F : {&kSquare, &basilica, &sq1}) {
    const auto r = tdiam_estimate(*F, Place::archimedean(), 12, Strategy::RandomRestartAscent, o);
    CHECK(r.max_height <= o.membership_tol);
    CHECK(r.d0n >= 0.9 * r.target);
  }
  o.threads = 1;
  const auto a = tdiam_estimate(basilica, Place::archimedean(), 6, Strategy::RandomRestartAscent, o);
  o.threads = 4;
  const auto b = tdiam_estimate(basilica, Place::archimedean(), 6, Strategy::RandomRestartAscent, o);
  CHECK(a.d0n == b.d0n);
  CHECK_THROWS_AS((void)tdiam_estimate(kSquare, Place::finite(5), 4, Strategy::RandomRestartAscent, o), InvalidInput);
}

TEST_CASE("det identity examples") {
  const auto a = det_identity_check(kTwo, 1);
  CHECK(a.det_abs == Rational(4));
  CHECK(a.res_power == Rational(4));
  CHECK(a.equal);
  const auto b = det_identity_check(kSquare, 3);
  CHECK(b.det_abs == Rational(1));
  CHECK(b.equal);
  CHECK_THROWS_AS((void)det_identity_check(kSquare, 20), ResourceLimit);
  CHECK_THROWS_AS((void)det_identity_check(kSquare, 0), InvalidInput);
}

TEST_CASE("det identity on random maps") {
  std::mt19937_64 rng(5);
  for (int d : {2, 3})
    for (int t : {1, 2, 3}) {
      if ((t + 1) * d > 12) continue;
      for (int i = 0; i < 10; ++i) {
        const auto F = random_map(rng, d);
        const auto c = det_identity_check(F, t);
        CHECK(c.equal);
        CHECK(c.res_power == pow(abs(F.resultant()), long(t) * (t + 1) / 2));
      }
    }
}

TEST_CASE("adelic transfinite diameter sum") {
  const auto s = adelic_tdiam_sum(kTwo);
  CHECK(s.exact_zero);
  REQUIRE(s.places.size() == 2);
  CHECK(s.places[0].target_log == doctest::Approx(-std::log(4.0) / 2));
  CHECK(s.places[1].target_log == doctest::Approx(std::log(4.0) / 2));
  CHECK(std::fabs(s.target_sum) <= 1e-15);
  const auto t = adelic_tdiam_sum(kSquare);
  CHECK(t.exact_zero);
  REQUIRE(t.places.size() == 1);
  CHECK(t.places[0].target_log == 0.0);
  CHECK(*t.places[0].estimate_log == doctest::Approx(std::log(8.0) / 7));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10; ++i) {
    const auto u = adelic_tdiam_sum(random_map(rng, 2 + i % 2), 4);
    CHECK(u.exact_zero);
    CHECK(std::fabs(u.target_sum) <= 1e-12);
  }
}
