#include <cmath>
#include <random>

#include "doctest.h"
#include "dyncap/errors.hpp"
#include "dyncap/homforms.hpp"

using namespace dyncap;

namespace {
QPoly P(std::initializer_list<long> c) {
  QPoly out;
  for (long v : c) out.emplace_back(v);
  return out;
}

HomogeneousPair random_pair(std::mt19937_64& rng, int d, long range = 4) {
  std::uniform_int_distribution<long> coef(-range, range);
  for (;;) {
    QPoly a(static_cast<size_t>(d + 1)), b(static_cast<size_t>(d + 1));
    for (auto& c : a) c = Rational(coef(rng));
    for (auto& c : b) c = Rational(coef(rng));
    if (resultant(a, b).is_zero()) continue;
    return {a, b};
  }
}

// Independent oracle: for F1 = prod (z ^ a_i), F2 = prod (z ^ b_j) the
// resultant is +- prod (a_i ^ b_j).
QPoly linear_form(const Vec2q& a) {
  // z ^ a = x a1 - y a0  ->  coefficients [a1, -a0] on (x, y).
  return QPoly{a[1], -a[0]};
}
}  // namespace

TEST_CASE("lift_rational_map examples") {
  const auto F = lift_rational_map(P({0, 0, 1}), P({1}));
  CHECK(F.f1() == P({1, 0, 0}));
  CHECK(F.f2() == P({0, 0, 1}));
  const auto G = lift_rational_map(P({1, 0, 1}), P({1}));
  CHECK(G.f1() == P({1, 0, 0}));
  CHECK(G.f2() == P({1, 0, 1}));
  CHECK_THROWS_AS(lift_rational_map(P({0, 0, 1}), P({0, 1})), InvalidInput);
  CHECK_THROWS_AS(lift_rational_map(P({0, 1}), P({1})), InvalidInput);
  // (z^3 - z) / (z^2 - 1) shares z^2 - 1 but keeps no degree 2.
  CHECK_THROWS_AS(lift_rational_map(P({0, -1, 0, 1}), P({-1, 0, 1})), InvalidInput);
  // Genuine degree-3 common factor case: (z^4 - z^2)/(z^2 - 1) reduces to z^2.
  CHECK_THROWS_AS(lift_rational_map(P({0, 0, -1, 0, 1}), P({-1, 0, 1})), InvalidInput);
}

TEST_CASE("resultant examples") {
  CHECK(resultant(HomogeneousPair(P({1, 0, 0}), P({0, 0, 1}))) == 1);
  CHECK(resultant(HomogeneousPair(P({2, 0, 0}), P({0, 0, 1}))) == 4);
  CHECK(abs(resultant(HomogeneousPair(P({1, 0, 0}), P({1, 0, 1})))) == 1);
  CHECK(resultant(P({1, 1, 0}), P({1, 1, 0})).is_zero());
  CHECK_THROWS_AS(HomogeneousPair(P({0, 1, 1}), P({0, 1, 2})), InvalidInput);
}

TEST_CASE("resultant agrees with the product-of-wedges oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2;
    std::vector<Vec2q> as, bs;
    QPoly f1{Rational(1)}, f2{Rational(1)};
    for (int i = 0; i < d; ++i) {
      as.emplace_back(Rational(c(rng)), Rational(c(rng)));
      bs.emplace_back(Rational(c(rng)), Rational(c(rng)));
      f1 = f1 * linear_form(as.back());
      f2 = f2 * linear_form(bs.back());
    }
    Rational oracle(1);
    for (const auto& a : as)
      for (const auto& b : bs) oracle *= a[0] * b[1] - a[1] * b[0];
    CHECK(abs(resultant(f1, f2)) == abs(oracle));
  }
}

TEST_CASE("scale law") {
  const HomogeneousPair F(P({1, 0, 0}), P({0, 0, 1}));
  CHECK(resultant(scale(F, Rational(3))) == 81);
  CHECK(scale(F, Rational(1)) == F);
  const HomogeneousPair G(P({2, 0, 0}), P({0, 0, 1}));
  CHECK(resultant(scale(G, Rational::parse("1/2"))) == Rational::parse("1/4"));
  CHECK_THROWS_AS(scale(F, Rational(0)), InvalidInput);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto H = random_pair(rng, 2 + i % 2);
    const Rational g = Rational::parse(i % 2 ? "-3/5" : "7/2");
    CHECK(resultant(scale(H, g)) == pow(g, 2L * H.degree()) * resultant(H));
  }
}

TEST_CASE("iterate examples") {
  const HomogeneousPair F(P({1, 0, 0}), P({0, 0, 1}));
  const auto F2 = iterate(F, 2);
  CHECK(F2.f1() == P({1, 0, 0, 0, 0}));
  CHECK(F2.f2() == P({0, 0, 0, 0, 1}));
  CHECK(iterate(F, 1) == F);
  const HomogeneousPair G(P({2, 0, 0}), P({0, 0, 1}));
  const auto G2 = iterate(G, 2);
  CHECK(G2.f1() == P({8, 0, 0, 0, 0}));
  CHECK(resultant(G2) == 4096);
  CHECK(resultant(G2) == pow(resultant(G), 6));
}

TEST_CASE("iterate agrees with pointwise composition") {
  std::mt19937_64 rng(8);
  const auto F = random_pair(rng, 2);
  const auto F3 = iterate(F, 3);
  Vec2q z(Rational(3), Rational::parse("-2/7"));
  const Vec2q direct = F(F(F(z)));
  const Vec2q via = F3(z);
  CHECK(direct[0] == via[0]);
  CHECK(direct[1] == via[1]);
}

TEST_CASE("place_bounds examples") {
  const HomogeneousPair F(P({1, 0, 0}), P({0, 0, 1}));
  const auto b7 = place_bounds(F, Place::finite(7));
  CHECK(b7.lower == 1.0);
  CHECK(b7.upper == 1.0);
  CHECK(b7.r == 1.0);
  CHECK(b7.R == 1.0);
  CHECK(b7.good_reduction);
  const auto barch = place_bounds(F, Place::archimedean());
  CHECK(barch.lower == 1.0);
  CHECK(barch.upper == 1.0);
  CHECK(barch.C == 0.0);
  const HomogeneousPair G(P({2, 0, 0}), P({0, 0, 1}));
  const auto g2 = place_bounds(G, Place::finite(2));
  CHECK(g2.lower == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(g2.upper == 1.0);
  CHECK_FALSE(g2.good_reduction);
  CHECK(g2.r <= g2.R);
}

TEST_CASE("place_bounds are valid on random points") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<long> small(-30, 30), den(1, 30);
  for (int trial = 0; trial < 4; ++trial) {
    auto F = random_pair(rng, 2 + trial % 2, 3);
    if (trial == 3) F = scale(F, Rational::parse("3/4"));
    const int d = F.degree();
    const auto barch = place_bounds(F, Place::archimedean());
    CHECK(barch.lower > 0.0);
    CHECK(barch.lower <= barch.upper);
    for (int i = 0; i < 1000; ++i) {
      Vec2c z(std::complex<double>(u(rng), u(rng)), std::complex<double>(u(rng), u(rng)));
      const double s = std::exp2(u(rng)) / sup_norm(z);  // ||z|| in [1/2, 2]
      z *= s;
      const double nz = std::pow(sup_norm(z), d), nf = sup_norm(F.evaluate(z));
      CHECK(barch.lower * nz <= nf * (1 + 1e-12));
      CHECK(nf <= barch.upper * nz * (1 + 1e-12));
    }
    for (long p : {2L, 3L, 5L}) {
      const Place place = Place::finite(p);
      const auto b = place_bounds(F, place);
      for (int i = 0; i < 300; ++i) {
        long a = small(rng), c = small(rng);
        if (a == 0 && c == 0) a = 1;
        const Vec2q z(Rational(Integer(a), Integer(den(rng))), Rational(Integer(c), Integer(den(rng))));
        const double lz = d * log_sup_norm(place, z), lf = log_sup_norm(place, F(z));
        CHECK(b.log_lower + lz <= lf + 1e-12);
        CHECK(lf <= b.log_upper + lz + 1e-12);
      }
    }
  }
}

TEST_CASE("det_matrix examples") {
  const HomogeneousPair G(P({2, 0, 0}), P({0, 0, 1}));
  const auto M = det_matrix(G, 1);
  CHECK(M.rows() == 4);
  // Rows {2x^3, 2x^2y, xy^2, y^3}.
  CHECK(M(0, 0) == 2);
  CHECK(M(1, 1) == 2);
  CHECK(M(2, 2) == 1);
  CHECK(M(3, 3) == 1);
  CHECK(abs(exact_determinant(M)) == 4);
  const HomogeneousPair F(P({1, 0, 0}), P({0, 0, 1}));
  CHECK(abs(exact_determinant(det_matrix(F, 1))) == 1);
  CHECK(abs(exact_determinant(det_matrix(F, 2))) == 1);
  CHECK(det_matrix(F, 2).rows() == 6);
  CHECK_THROWS_AS(det_matrix(F, 0), InvalidInput);
}

TEST_CASE("exact determinant against cofactor expansion") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> c(-9, 9), den(1, 5);
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix m(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = Rational(Integer(c(rng)), Integer(den(rng)));
    if (trial == 0) m.row(2) = m.row(1);
    // Leibniz formula over all 24 permutations.
    std::vector<int> perm{0, 1, 2, 3};
    Rational oracle(0);
    do {
      int inversions = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) inversions += perm[static_cast<size_t>(i)] > perm[static_cast<size_t>(j)];
      Rational term(inversions % 2 ? -1 : 1);
      for (int i = 0; i < 4; ++i) term *= m(i, perm[static_cast<size_t>(i)]);
      oracle += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(exact_determinant(m) == oracle);
  }
}
