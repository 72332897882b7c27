#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <optional>
#include <random>

#include "entrodim/lp.hpp"

using namespace entrodim;
using Q = boost::multiprecision::cpp_rational;

namespace {

// Exhaustive vertex enumeration for tiny bounded programs: every choice of
// num_vars tight constraints (rows or x_i = 0) is solved exactly and kept when
// feasible.
std::optional<Q> vertex_minimum(const LinearProgram& lp) {
  int n = lp.num_vars;
  struct Con {
    std::vector<Q> a;
    Q rhs;
    Sense sense;
  };
  std::vector<Con> cons;
  for (const auto& r : lp.rows) {
    Con c{std::vector<Q>(static_cast<std::size_t>(n), 0), Q(r.rhs), r.sense};
    for (auto [j, v] : r.coeffs) c.a[static_cast<std::size_t>(j)] += Q(v);
    cons.push_back(c);
  }
  for (int j = 0; j < n; ++j) {
    Con c{std::vector<Q>(static_cast<std::size_t>(n), 0), 0, Sense::ge};
    c.a[static_cast<std::size_t>(j)] = 1;
    cons.push_back(c);
  }
  std::size_t m = cons.size();
  std::optional<Q> best;
  std::vector<std::size_t> pick;
  auto feasible = [&](const std::vector<Q>& x) {
    for (const auto& c : cons) {
      Q lhs = 0;
      for (int j = 0; j < n; ++j) lhs += c.a[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
      if (c.sense == Sense::le && lhs > c.rhs) return false;
      if (c.sense == Sense::ge && lhs < c.rhs) return false;
      if (c.sense == Sense::eq && lhs != c.rhs) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(pick.size()) == n) {
      std::vector<std::vector<Q>> A;
      for (auto i : pick) {
        auto row = cons[i].a;
        row.push_back(cons[i].rhs);
        A.push_back(row);
      }
      for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
          if (A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
            piv = r;
            break;
          }
        if (piv < 0) return;  // singular
        std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(piv)]);
        for (int r = 0; r < n; ++r) {
          if (r == col) continue;
          Q f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
          for (int k = 0; k <= n; ++k)
            A[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= f * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        }
      }
      std::vector<Q> x(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j)
        x[static_cast<std::size_t>(j)] = A[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)] / A[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
      if (!feasible(x)) return;
      Q v = 0;
      for (int j = 0; j < n; ++j) v += Q(lp.objective[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t i = from; i < m; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

LinearProgram random_lp(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), rhs(-4, 8), nv(1, 3), nr(1, 4), sense(0, 2);
  LinearProgram lp;
  lp.num_vars = nv(rng);
  for (int j = 0; j < lp.num_vars; ++j) lp.objective.push_back(coef(rng));
  int rows = nr(rng);
  for (int r = 0; r < rows; ++r) {
    LinearProgram::Row row;
    for (int j = 0; j < lp.num_vars; ++j)
      if (int c = coef(rng)) row.coeffs.emplace_back(j, c);
    row.sense = static_cast<Sense>(sense(rng));
    row.rhs = rhs(rng);
    lp.rows.push_back(row);
  }
  // Box keeps every program bounded.
  for (int j = 0; j < lp.num_vars; ++j) lp.rows.push_back({{{j, 1.0}}, Sense::le, 6});
  return lp;
}

}  // namespace

TEST_CASE("simplex matches vertex enumeration") {
  std::mt19937 rng(1234);
  int feasible = 0;
  for (int t = 0; t < 400; ++t) {
    auto lp = random_lp(rng);
    auto ref = vertex_minimum(lp);
    auto fl = solve_lp(lp);
    auto ex = solve_lp_exact(lp);
    if (!ref) {
      CHECK(fl.status == LpStatus::infeasible);
      CHECK(ex.status == LpStatus::infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(fl.status == LpStatus::optimal);
    REQUIRE(ex.status == LpStatus::optimal);
    double r = ref->convert_to<double>();
    CHECK(fl.value == doctest::Approx(r).epsilon(1e-9));
    CHECK(ex.value == r);
    CHECK(ex.exact);
  }
  CHECK(feasible > 100);
}

TEST_CASE("statuses and duals") {
  LinearProgram unb{1, {-1.0}, {{{{0, 1.0}}, Sense::ge, 0}}};
  CHECK(solve_lp(unb).status == LpStatus::unbounded);
  CHECK(solve_lp_exact(unb).status == LpStatus::unbounded);
  LinearProgram inf{1, {1.0}, {{{{0, 1.0}}, Sense::le, -1}}};
  CHECK(solve_lp(inf).status == LpStatus::infeasible);

  // min x + y, x + y >= 1, x >= 0.25: dual of the first row is 1.
  LinearProgram lp{2, {1.0, 1.0}, {{{{0, 1.0}, {1, 1.0}}, Sense::ge, 1}, {{{0, 1.0}}, Sense::ge, 0.25}}};
  auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(1.0));
  REQUIRE(s.duals.size() == 2);
  CHECK(s.duals[0] == doctest::Approx(1.0));
  CHECK(s.duals[1] == doctest::Approx(0.0).epsilon(1e-12));
  // Strong duality: b.y equals the value.
  CHECK(s.duals[0] * 1 + s.duals[1] * 0.25 == doctest::Approx(s.value));
}

TEST_CASE("degenerate program terminates") {
  // Many redundant constraints through the optimum.
  LinearProgram lp;
  lp.num_vars = 3;
  lp.objective = {-1, -1, -1};
  for (int k = 1; k <= 12; ++k) lp.rows.push_back({{{0, 1.0}, {1, 1.0 * k}, {2, 1.0}}, Sense::le, 0});
  lp.rows.push_back({{{0, 1.0}}, Sense::le, 0});
  auto s = solve_lp(lp);
  CHECK(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(0.0));
}
