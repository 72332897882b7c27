#include <doctest.h>

#include <cmath>
#include <random>

#include "entrodim/error.hpp"
#include "entrodim/localent.hpp"

using namespace entrodim;

namespace {

const double kLogPhi = std::log((1 + std::sqrt(5.0)) / 2);

double shannon(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }

// Parry measure from the eigen-data of [[1,1],[1,0]]: pi = (phi^2, 1)/(phi^2+1).
double parry_010() {
  double phi = (1 + std::sqrt(5.0)) / 2;
  double pi0 = phi * phi / (phi * phi + 1);
  double p01 = 1 / (phi * phi);
  return pi0 * p01 * 1.0;
}

SamplingOptions quick(int samples = 100) {
  SamplingOptions o;
  o.samples = samples;
  o.window = {200, 400};
  return o;
}

}  // namespace

TEST_CASE("ball measure") {
  auto half = MarkovMeasure::bernoulli({0.5, 0.5});
  CHECK(ball_measure(half, Word{1, 0, 0, 1, 1, 0}, 5) == doctest::Approx(1.0 / 32));
  auto parry = MarkovMeasure::parry(SubshiftSystem::golden_mean());
  CHECK(ball_measure(parry, Word{0, 1, 0}, 3) == doctest::Approx(parry_010()).epsilon(1e-12));
  CHECK(ball_measure(parry, Word{0, 1, 1}, 3) == 0);
  CHECK(entropy_rate(parry) == doctest::Approx(kLogPhi).epsilon(1e-12));
  CHECK(parry.respects(SubshiftSystem::golden_mean()));
  CHECK_FALSE(half.respects(SubshiftSystem::golden_mean()));
  CHECK_THROWS_AS(ball_measure(half, Word{0, 1}, 3), ValidationError);
  CHECK_THROWS_AS(MarkovMeasure::from_matrix({{0.5, 0.4}, {0.5, 0.5}}), ValidationError);
  CHECK_THROWS_AS(MarkovMeasure::from_matrix({{0.5, 0.5}, {0.5, 0.5}}, {0.9, 0.1}), ValidationError);
}

TEST_CASE("local entropy curves") {
  std::mt19937_64 rng(3);
  auto half = MarkovMeasure::bernoulli({0.5, 0.5});
  auto x = half.sample(2000, rng);
  auto c = local_entropy(half, x, Window{});
  for (double v : c.values) CHECK(v == doctest::Approx(std::log(2.0)));
  auto q = MarkovMeasure::bernoulli({0.25, 0.75});
  auto y = q.sample(2000, rng);
  auto t = local_entropy(q, y, Window{});
  CHECK(std::abs(t.lower - shannon(0.25)) < 0.02 + 0.02);
  CHECK(std::abs(t.values.back() - shannon(0.25)) < 0.02);
  Word zeros(2000, 0);
  auto z = local_entropy(q, zeros, Window{});
  CHECK(z.lower == doctest::Approx(std::log(4.0)));
  CHECK(z.upper == doctest::Approx(std::log(4.0)));
  auto fixed = MarkovMeasure::from_matrix({{1, 0}, {0, 1}}, {1, 0});
  CHECK_THROWS_AS(local_entropy(fixed, Word(2000, 1), Window{}), ValidationError);
  CHECK_THROWS_AS(local_entropy(half, Word(100, 0), Window{}), ValidationError);
  CHECK_THROWS_AS((Window{10, 5}.validate()), ValidationError);
}

TEST_CASE("Monte Carlo entropy") {
  auto half = measure_entropy(MarkovMeasure::bernoulli({0.5, 0.5}), 500, Window{}, 7);
  CHECK(std::abs(half.upper - std::log(2.0)) < 0.02);
  CHECK(std::abs(half.lower - std::log(2.0)) < 0.02);
  auto q = measure_entropy(MarkovMeasure::bernoulli({0.25, 0.75}), 500, Window{}, 7);
  CHECK(std::abs(q.upper - 0.5623) < 0.02);
  CHECK(std::abs(q.lower - 0.5623) < 0.02);
  // Window tails of a non-uniform measure spread by the CLT scale, far more
  // than the Monte Carlo half-width.
  CHECK(q.upper - q.lower < 0.03);
  auto p = measure_entropy(MarkovMeasure::parry(SubshiftSystem::golden_mean()), 500, Window{}, 7);
  CHECK(std::abs(p.upper - kLogPhi) < 0.02);
  CHECK(std::abs(p.upper - p.lower) <= 2 * std::max(p.half_width_upper, p.half_width_lower) + 2e-3);
  auto fixed = measure_entropy(MarkovMeasure::from_matrix({{1, 0}, {0, 1}}, {1, 0}), 20, Window{}, 7);
  CHECK(fixed.upper == 0);
  CHECK(fixed.lower == 0);

  auto one = measure_entropy(MarkovMeasure::bernoulli({0.3, 0.7}), 60, Window{100, 300}, 11, 1);
  auto three = measure_entropy(MarkovMeasure::bernoulli({0.3, 0.7}), 60, Window{100, 300}, 11, 3);
  CHECK(one.upper == three.upper);
  CHECK(one.lower == three.lower);
  CHECK(one.half_width_upper == three.half_width_upper);
  auto other = measure_entropy(MarkovMeasure::bernoulli({0.3, 0.7}), 60, Window{100, 300}, 12, 1);
  CHECK(other.upper != one.upper);
}

TEST_CASE("variational gap") {
  auto fs = SubshiftSystem::full_shift(2);
  std::vector<MarkovMeasure> cands{MarkovMeasure::bernoulli({0.3, 0.7}), MarkovMeasure::bernoulli({0.5, 0.5})};
  auto r = variational_gap(fs, CylinderSet::everything(fs), cands, 14, 0.02, quick());
  CHECK(r.holds);
  CHECK(r.achiever == 1);
  CHECK(r.gap < 0.01);
  auto gm = SubshiftSystem::golden_mean();
  auto g = variational_gap(gm, CylinderSet::everything(gm), {MarkovMeasure::parry(gm)}, 16, 0.03, quick());
  CHECK(g.holds);
  CHECK(g.gap <= 0.03);
  auto fixed = MarkovMeasure::from_matrix({{1, 0}, {0, 1}}, {1, 0});
  auto s = variational_gap(fs, CylinderSet::from_words({{1}}), {fixed, MarkovMeasure::bernoulli({0.5, 0.5})}, 12, 0.02, quick());
  CHECK(s.rows[0].skipped);
  CHECK_FALSE(s.rows[0].notice.empty());
  CHECK_FALSE(s.rows[1].skipped);
  CHECK(s.achiever == 1);
  // A candidate charging a forbidden transition is skipped too.
  auto off = variational_gap(gm, CylinderSet::everything(gm), {MarkovMeasure::bernoulli({0.5, 0.5})}, 12, 0.02, quick());
  CHECK(off.rows[0].skipped);
  CHECK(off.achiever == -1);
}

TEST_CASE("restricted measures") {
  auto fs = SubshiftSystem::full_shift(2);
  auto half = MarkovMeasure::bernoulli({0.5, 0.5});
  auto all = CylinderSet::everything(fs);
  auto same = restrict_and_recheck(half, all, all, 0.01, quick());
  CHECK(same.mu_lower == doctest::Approx(same.nu_lower));
  CHECK(same.holds);
  auto c0 = restrict_and_recheck(half, all, CylinderSet::from_words({{0}}), 0.01, quick());
  CHECK(c0.mass_y == doctest::Approx(0.5));
  CHECK(std::abs(c0.mu_lower - c0.nu_lower) < 0.01);
  CHECK(c0.holds);
  std::vector<Word> deep;
  for (int m = 0; m < 32; ++m) deep.push_back({(m >> 4) & 1, (m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1, 0});
  auto d = restrict_and_recheck(half, all, CylinderSet::from_words(deep), 0.01, quick());
  CHECK(d.mass_y == doctest::Approx(0.5));
  CHECK(d.holds);

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(0.15, 0.85);
  for (int t = 0; t < 15; ++t) {
    double p = u(rng);
    auto mu = MarkovMeasure::bernoulli({p, 1 - p});
    std::vector<Word> ys;
    double mass = 0;
    while (mass < 0.1) {
      Word w;
      int n = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < n; ++k) w.push_back(std::uniform_int_distribution<int>(0, 1)(rng));
      ys.push_back(w);
      mass = 0;
      auto norm = CylinderSet::from_words(ys).normalized();
      for (const auto& c : norm.cylinders()) mass += ball_measure(mu, c.word, static_cast<int>(c.word.size()));
    }
    auto opt = quick(60);
    opt.seed = static_cast<std::uint64_t>(t + 1);
    CHECK(restrict_and_recheck(mu, all, CylinderSet::from_words(ys), 0.02, opt).holds);
  }
  auto fixed = MarkovMeasure::from_matrix({{1, 0}, {0, 1}}, {1, 0});
  CHECK_THROWS_AS(restrict_and_recheck(fixed, all, CylinderSet::from_words({{1}}), 0.01, quick()), ValidationError);
  CHECK_THROWS_AS(restrict_and_recheck(half, CylinderSet::from_words({{0}}), CylinderSet::from_words({{1}}), 0.01, quick()),
                  ValidationError);
}

TEST_CASE("measure dimension") {
  auto leb = measure_dimension(DyadicMeasure::bernoulli(0.5), 64);
  CHECK(std::abs(leb.upper - 1) < 0.02);
  CHECK(std::abs(leb.lower - 1) < 0.02);
  TreeMeasure point{8, {{{0, 1, 1, 0, 1, 0, 0, 1}, 1.0}}};
  auto pt = measure_dimension(DyadicMeasure::tree(point), 8);
  CHECK(pt.upper == 0);
  CHECK(pt.lower == 0);
  CHECK_FALSE(pt.sampled);
  // Coin measure: H(p)/log 2. The window minimum biases the proxy down by
  // the CLT scale, so a deep ladder is needed for 0.03.
  auto coin = measure_dimension(DyadicMeasure::bernoulli(0.25), 8000);
  double h = shannon(0.25) / std::log(2.0);
  CHECK(std::abs(coin.upper - h) < 0.03);
  CHECK(std::abs(coin.lower - h) < 0.03);
  // Truncated nested mixture: component n has dimension 1 - 2^-n.
  auto mix = measure_dimension(DyadicMeasure::nested_mixture(4), 1024);
  CHECK(std::abs(mix.lower - 0.5) < 0.02);
  CHECK(std::abs(mix.upper - 0.9375) < 0.01);
  auto a = measure_dimension(DyadicMeasure::nested_mixture(4), 256, 0.05, 500, 5);
  auto b = measure_dimension(DyadicMeasure::nested_mixture(4), 256, 0.05, 500, 5);
  CHECK(a.upper == b.upper);
  CHECK(a.lower == b.lower);
  CHECK_THROWS_AS(DyadicMeasure::nested_mixture(0), ValidationError);
  CHECK_THROWS_AS(measure_dimension(DyadicMeasure::bernoulli(0.5), 64, 0.6), ValidationError);
}

TEST_CASE("finite slice audit") {
  auto u = block_union({SubshiftSystem::golden_mean(), SubshiftSystem::full_shift(2), SubshiftSystem::full_shift(3)});
  auto r = finite_slice_audit(u.sys, u.parts, 12, 1e-3);
  CHECK(r.attained);
  REQUIRE(r.parts.size() == 3);
  CHECK(r.parts[0].h_B < r.parts[1].h_B);
  CHECK(r.parts[1].h_B < r.parts[2].h_B);
  CHECK(r.ties == std::vector<int>{2});
  CHECK(std::abs(r.union_h_B - std::log(3.0)) < 1e-3);
  CHECK_FALSE(r.note.empty());
  auto single = finite_slice_audit(SubshiftSystem::full_shift(2), {CylinderSet::everything(SubshiftSystem::full_shift(2))}, 10);
  CHECK(single.attained);
  auto twin = block_union({SubshiftSystem::full_shift(2), SubshiftSystem::full_shift(2)});
  auto t = finite_slice_audit(twin.sys, twin.parts, 10, 1e-3);
  CHECK(t.attained);
  CHECK(t.ties == std::vector<int>{0, 1});
  CHECK(t.union_h_B - t.parts[0].h_B <= t.slack + 1e-9);
}
