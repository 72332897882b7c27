#include <doctest.h>

#include <cmath>
#include <random>

#include "entrodim/coverpack.hpp"
#include "entrodim/error.hpp"
#include "entrodim/gauge.hpp"

using namespace entrodim;

TEST_CASE("exponential gauge values") {
  CHECK(Gauge::exp(std::log(2.0))(3) == doctest::Approx(0.125));
  CHECK(Gauge::exp(1)(1) == doctest::Approx(std::exp(-1.0)));
  CHECK(Gauge::exp(0.5)(10) == doctest::Approx(0.0067379).epsilon(1e-5));
  CHECK_THROWS_AS(Gauge::exp(0), ValidationError);
  CHECK_THROWS_AS(Gauge::exp(-1), ValidationError);
  CHECK_THROWS_AS(Gauge::exp(1)(0), ValidationError);
}

TEST_CASE("table gauge needs a tail and stays monotone") {
  auto g = Gauge::table({0.5, 0.25, 0.2}, 0.3);
  CHECK(g(2) == 0.25);
  CHECK(g(5) == doctest::Approx(0.2 * std::exp(-0.6)));
  CHECK_THROWS_AS(Gauge::table({0.5, 0.6}, 0.3), ValidationError);
  CHECK_THROWS_AS(Gauge::table({}, 0.3), ValidationError);
  CHECK_THROWS_AS(Gauge::table({0.5}, -1), ValidationError);
}

TEST_CASE("random gauges are positive and nonincreasing") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> vals{u(rng)};
    for (int k = 0; k < 10; ++k) vals.push_back(vals.back() * std::uniform_real_distribution<double>(0.3, 1.0)(rng));
    Gauge g = t % 2 ? Gauge::exp(u(rng)) : Gauge::table(vals, u(rng));
    double prev = INFINITY;
    for (int n = 1; n <= 60; ++n) {
      CHECK(g(n) > 0);
      CHECK(g(n) <= prev);
      prev = g(n);
    }
  }
}

TEST_CASE("dominance") {
  auto r = dominates(Gauge::exp(0.3), Gauge::exp(0.6), 100, 1e-6);
  CHECK(r.holds);
  CHECK(r.ratios.size() == 100);
  CHECK_FALSE(dominates(Gauge::exp(0.3), Gauge::exp(0.3), 100, 1e-6).holds);
  std::vector<double> vals;
  for (int n = 1; n <= 100; ++n) vals.push_back(std::exp(-0.5 * n) / n);
  // Ratio 1/n is 0.01 at the horizon: it needs tol above that.
  auto t = Gauge::table(vals, 0.5);
  CHECK(dominates(Gauge::exp(0.5), t, 100, 0.02).holds);
  CHECK_FALSE(dominates(Gauge::exp(0.5), t, 100, 1e-6).holds);
}

TEST_CASE("cut points satisfy the strict inequality scan") {
  std::vector<Gauge> chain{Gauge::exp(1), Gauge::exp(2), Gauge::exp(3)};
  auto cuts = choose_cutpoints(chain, 100);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0] < cuts[1]);
  int prev = 1;
  for (std::size_t p = 0; p < cuts.size(); ++p) {
    for (int n = prev; n <= 100; ++n) CHECK(chain[p + 1](n) < chain[p](n));
    prev = cuts[p];
  }
  CHECK(choose_cutpoints({Gauge::exp(1)}, 100).empty());
  CHECK_THROWS_AS(choose_cutpoints({Gauge::exp(2), Gauge::exp(1)}, 100), ValidationError);
  CHECK_THROWS_AS(choose_cutpoints({}, 100), ValidationError);
}

TEST_CASE("stitching") {
  auto g = stitch_gauges({Gauge::exp(1), Gauge::exp(2)}, {5}, 50);
  for (int n = 1; n < 5; ++n) CHECK(g(n) == Gauge::exp(1)(n));
  for (int n = 5; n <= 50; ++n) CHECK(g(n) == Gauge::exp(2)(n));
  auto one = stitch_gauges({Gauge::exp(0.7)}, {}, 50);
  for (int n = 1; n <= 50; ++n) CHECK(one(n) == Gauge::exp(0.7)(n));

  std::vector<Gauge> chain{Gauge::exp(0.5), Gauge::exp(1), Gauge::exp(1.5)};
  auto cuts = choose_cutpoints(chain, 200);
  auto st = stitch_gauges(chain, cuts, 200);
  std::vector<int> starts{1, cuts[0], cuts[1]};
  for (int n = 1; n <= 200; ++n) {
    std::size_t p = n >= cuts[1] ? 2 : n >= cuts[0] ? 1 : 0;
    CHECK(st(n) == chain[p](n));
    CHECK(st(n) <= chain[0](n));
  }
  CHECK(st(200) / chain[0](200) < 1e-30);
  // Increasing seam: a steeper gauge followed by a flatter one.
  CHECK_THROWS_AS(stitch_gauges({Gauge::exp(3), Gauge::exp(0.1)}, {5}, 50), ValidationError);
  CHECK_THROWS_AS(stitch_gauges({Gauge::exp(1), Gauge::exp(2)}, {1}, 50), ValidationError);
}

TEST_CASE("dominated gauge gives a small cover value") {
  // M^{b*} <= tol (M^b + 1) at the horizon depth.
  auto sys = SubshiftSystem::golden_mean();
  auto z = CylinderSet::everything(sys);
  Gauge b = Gauge::exp(0.45), bs = Gauge::exp(0.9);
  int H = 40;
  auto rep = dominates(b, bs, H, 1e-6);
  REQUIRE(rep.holds);
  double mb = min_cover_value(sys, z, b, H, H).value;
  double mbs = min_cover_value(sys, z, bs, H, H).value;
  CHECK(mbs <= 1e-6 * (mb + 1));
}
