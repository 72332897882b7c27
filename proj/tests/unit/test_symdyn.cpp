#include <doctest.h>

#include <cmath>
#include <random>

#include "entrodim/error.hpp"
#include "entrodim/symdyn.hpp"
#include "oracles.hpp"

using namespace entrodim;

TEST_CASE("word counts match enumeration") {
  std::mt19937 rng(11);
  for (int t = 0; t < 30; ++t) {
    auto sys = oracle::random_system(rng, 2 + t % 3);
    for (int n = 1; n <= 7; ++n) CHECK(count_words(sys, n) == oracle::words(sys, n).size());
  }
  CHECK(count_words(SubshiftSystem::full_shift(2), 10) == 1024);
  // Fibonacci
  CHECK(count_words(SubshiftSystem::golden_mean(), 10) == 144);
}

TEST_CASE("system validation") {
  CHECK_THROWS_AS(SubshiftSystem(2, {{1, 2}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(SubshiftSystem(2, {{0, 0}, {1, 1}}), ValidationError);
  CHECK_THROWS_AS(SubshiftSystem(2, {{1, 0}, {1, 0}}), ValidationError);  // column 1 unreachable
  CHECK_THROWS_AS(SubshiftSystem(2, {{1, 1}}), ValidationError);
  auto gm = SubshiftSystem::golden_mean();
  CHECK(gm.admissible(Word{0, 1, 0, 0}));
  CHECK_FALSE(gm.admissible(Word{0, 1, 1}));
  try {
    gm.require_admissible(Word{0, 1, 1, 0}, "x");
    FAIL("expected a throw");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("x[2]") != std::string::npos);
  }
}

TEST_CASE("cylinder set normalisation and relation") {
  auto z = CylinderSet::from_words({{0, 1}, {0}, {1, 1, 0}, {1, 1, 0}});
  auto n = z.normalized();
  REQUIRE(n.size() == 2);
  CHECK(n.cylinders()[0].word == Word{0});
  CHECK(n.cylinders()[1].word == Word{1, 1, 0});
  CHECK(relation(n, Word{0, 1, 1}) == Relation::inside);
  CHECK(relation(n, Word{1}) == Relation::partial);
  CHECK(relation(n, Word{1, 0}) == Relation::disjoint);
  CHECK_THROWS_AS(CylinderSet().validate(SubshiftSystem::full_shift(2)), ValidationError);
  CHECK_THROWS_AS(CylinderSet({{{0}, 3}}).validate(SubshiftSystem::full_shift(2)), ValidationError);

  // Relation against enumeration on random instances.
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    auto inst = oracle::random_instance(rng, 200, 4);
    auto zn = inst.z.normalized();
    for (int len = 1; len <= 4; ++len)
      for (const auto& w : oracle::words(inst.sys, len)) {
        bool meet = oracle::meets(zn, w);
        bool inside = false;
        for (const auto& c : zn.cylinders()) inside = inside || oracle::prefix_of(c.word, w);
        Relation r = relation(zn, w);
        CHECK((r != Relation::disjoint) == meet);
        CHECK((r == Relation::inside) == inside);
      }
  }
}

TEST_CASE("balls and distances") {
  Ball a{{0, 1, 1}, 2}, b{{0, 1, 0}, 3}, c{{1}, 1};
  CHECK(ball_contains(a, b));
  CHECK_FALSE(ball_contains(b, a));
  CHECK(balls_disjoint(a, c));
  CHECK_FALSE(balls_disjoint(a, b));
  CHECK(one_sided_distance(Word{0, 1, 1}, Word{0, 1, 0}) == doctest::Approx(0.25));
  CHECK(one_sided_distance(Word{0, 1}, Word{0, 1}) == 0);
  CHECK(bowen_distance(Word{0, 1, 1, 0}, Word{0, 1, 1, 1}, 2) <= 0.5);
  CHECK(bowen_distance(Word{0, 1, 1, 0}, Word{0, 1, 0, 0}, 3) >= 0.5);
}

TEST_CASE("column boundary follows the square-root case split") {
  CHECK(column_start(1) == 0);
  CHECK(column_start(2) == -1);
  CHECK(column_start(3) == -1);
  CHECK(column_start(4) == -1);
  CHECK(column_start(5) == -2);
  CHECK(column_start(9) == -2);
  CHECK(column_start(10) == -3);
  // Least integer strictly above -sqrt(n).
  for (int n = 1; n <= 400; ++n) {
    int k = column_start(n);
    CHECK(k > -std::sqrt(n));
    CHECK(k - 1 <= -std::sqrt(n));
  }
}

TEST_CASE("sqrt-metric distance") {
  // Agree on positions -1..2, differ at 3 and -2: the first n whose column
  // reaches a disagreement is n = 4 (right edge 3), so N = 3... checked by
  // brute force over n below.
  TwoSidedWindow x{-3, {0, 0, 1, 1, 0, 1, 0}}, y{-3, {0, 1, 1, 1, 0, 1, 1}};
  auto d = sqrt_metric_distance(x, y);
  REQUIRE(d.exact);
  int N = 0;
  for (int n = 1;; ++n) {
    bool agree = true;
    for (int m = column_start(n); m <= n - 1; ++m) agree = agree && x.at(m) == y.at(m);
    if (!agree) break;
    N = n;
  }
  CHECK(d.agreement == N);
  CHECK(d.value == doctest::Approx(std::ldexp(1.0, -N)));
  // Identical short windows cannot decide.
  TwoSidedWindow u{-1, {0, 1, 1}}, v{-1, {0, 1, 1}};
  auto e = sqrt_metric_distance(u, v);
  CHECK_FALSE(e.exact);
  CHECK(e.lower <= e.upper);
  CHECK_THROWS_AS(sqrt_metric_distance_exact(u, v), IndeterminateDistance);
}

TEST_CASE("forward projection of two-sided cylinders") {
  auto gm2 = SubshiftSystem::golden_mean(Sidedness::two);
  // [1] at position -1 forces x_0 = 0.
  auto p = forward_projection(gm2, CylinderSet({{{1}, -1}}));
  auto pn = p.normalized();
  REQUIRE(pn.size() == 1);
  CHECK(pn.cylinders()[0].word == Word{0});
  // A word straddling 0 keeps its forward part.
  auto q = forward_projection(gm2, CylinderSet({{{0, 1, 0}, -1}})).normalized();
  REQUIRE(q.size() == 1);
  CHECK(q.cylinders()[0].word == Word{1, 0});
  CHECK(one_sided(gm2).sided() == Sidedness::one);
}
