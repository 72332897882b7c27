#include "entrodim/frostman.hpp"

#include <cmath>
#include <numeric>

#include "entrodim/error.hpp"
#include "entrodim/lp.hpp"

namespace entrodim {

double TreeMeasure::mass(std::span<const int> w) const {
  double m = 0;
  for (const auto& [a, p] : atoms)
    if (is_prefix(w, a)) m += p;
  return m;
}

ExplicitTree explicit_tree(const SubshiftSystem& sys, const CylinderSet& k, int D, std::size_t node_limit) {
  if (D < 1) throw ValidationError("D: must be >= 1");
  k.validate(sys);
  CylinderSet kn = k.normalized();
  ExplicitTree t;
  t.nodes.push_back({{}, -1, {}});
  std::vector<int> stack{0};
  // Depth-first with children pushed in reverse keeps lexicographic order.
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    Word w = t.nodes[static_cast<std::size_t>(id)].word;
    if (static_cast<int>(w.size()) == D) {
      t.atoms.push_back(id);
      continue;
    }
    std::vector<int> next;
    if (w.empty()) {
      for (int b = 0; b < sys.alphabet(); ++b) next.push_back(b);
    } else {
      next = sys.successors(w.back());
    }
    std::vector<int> kids;
    for (int b : next) {
      Word c = w;
      c.push_back(b);
      if (relation(kn, c) == Relation::disjoint) continue;
      if (t.nodes.size() >= node_limit)
        throw ValidationError("tree exceeds " + std::to_string(node_limit) + " nodes; lower D");
      t.nodes.push_back({std::move(c), id, {}});
      kids.push_back(static_cast<int>(t.nodes.size()) - 1);
    }
    t.nodes[static_cast<std::size_t>(id)].children = kids;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  std::sort(t.atoms.begin(), t.atoms.end(), [&](int a, int b) {
    return t.nodes[static_cast<std::size_t>(a)].word < t.nodes[static_cast<std::size_t>(b)].word;
  });
  return t;
}

namespace {

void check_depths(int N, int D) {
  if (N < 1) throw ValidationError("N: must be >= 1");
  if (N > D) throw ValidationError("N: must not exceed D");
}

// For each atom, the ids of its ancestors (itself included) with depth in [N, D].
std::vector<std::vector<int>> atom_chains(const ExplicitTree& t, int N) {
  std::vector<std::vector<int>> out;
  for (int a : t.atoms) {
    std::vector<int> chain;
    for (int v = a; v >= 0; v = t.nodes[static_cast<std::size_t>(v)].parent)
      if (static_cast<int>(t.nodes[static_cast<std::size_t>(v)].word.size()) >= N) chain.push_back(v);
    out.push_back(std::move(chain));
  }
  return out;
}

}  // namespace

WeightedCover weighted_cover_value(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D) {
  check_depths(N, D);
  ExplicitTree t = explicit_tree(sys, k, D);
  std::vector<int> var_of(t.nodes.size(), -1);
  std::vector<int> node_of;
  LinearProgram lp;
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    int depth = static_cast<int>(t.nodes[v].word.size());
    if (depth < N) continue;
    var_of[v] = lp.num_vars++;
    node_of.push_back(static_cast<int>(v));
    lp.objective.push_back(b(depth));
  }
  for (const auto& chain : atom_chains(t, N)) {
    LinearProgram::Row row;
    row.sense = Sense::ge;
    row.rhs = 1;
    for (int v : chain) row.coeffs.emplace_back(var_of[static_cast<std::size_t>(v)], 1.0);
    lp.rows.push_back(std::move(row));
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw CertificationError("weighted cover LP not solved to optimality");
  WeightedCover wc;
  wc.depth = D;
  wc.N = N;
  wc.value = sol.value;
  for (int j = 0; j < lp.num_vars; ++j) {
    double c = sol.x[static_cast<std::size_t>(j)];
    if (c > 1e-12) wc.pairs.push_back({t.nodes[static_cast<std::size_t>(node_of[static_cast<std::size_t>(j)])].word, c});
  }
  return wc;
}

SandwichReport sandwich_check(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D) {
  SandwichReport r;
  r.lower = tripled_cover_value(sys, k, b, N, D, 0).value;
  r.W = weighted_cover_value(sys, k, b, N, D).value;
  r.upper = min_cover_value(sys, k, b, N, D, 0).value;
  auto le = [](double x, double y) { return x <= y * (1 + 1e-9) + 1e-12; };
  r.holds = le(r.lower, r.W) && le(r.W, r.upper);
  return r;
}

namespace {

// Best rational approximation with bounded denominator (continued fractions).
std::pair<long long, long long> to_fraction(double x, long long max_den) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(r);
    auto ai = static_cast<long long>(a);
    long long q2 = q0 + ai * q1;
    if (q2 > max_den) break;
    long long p2 = p0 + ai * p1;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1 / frac;
  }
  return {p1, q1};
}

}  // namespace

std::vector<BallFamily> round_weighted_cover(const SubshiftSystem& sys, const WeightedCover& cover, double t,
                                             long long max_denominator) {
  if (!(t > 0 && t < 1) && t != 1) throw ValidationError("t: must lie in (0, 1]");
  std::vector<long long> num, den;
  for (std::size_t i = 0; i < cover.pairs.size(); ++i) {
    const auto& p = cover.pairs[i];
    sys.require_admissible(p.word, "pairs[" + std::to_string(i) + "].word");
    if (!(p.coefficient >= 0)) throw ValidationError("pairs[" + std::to_string(i) + "].c: must be >= 0");
    auto [a, q] = to_fraction(p.coefficient, max_denominator);
    if (q == 0 || std::abs(static_cast<double>(a) / static_cast<double>(q) - p.coefficient) > 1e-9)
      throw ValidationError("pairs[" + std::to_string(i) + "].c: " + std::to_string(p.coefficient) +
                            " is not rational within tolerance");
    num.push_back(a);
    den.push_back(q);
  }
  long long L = 1;
  for (long long q : den) {
    L = std::lcm(L, q);
    if (L > 1000000000LL) throw ValidationError("pairs: common denominator too large to clear");
  }
  std::vector<long long> v(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) v[i] = num[i] * (L / den[i]);
  // Weighted indicators are >= t on K, so >= t L after clearing and hence
  // >= ceil(t L) since they are integers.
  auto m = static_cast<long long>(std::ceil(t * static_cast<double>(L) - 1e-9));
  std::vector<BallFamily> rounds;
  for (long long j = 0; j < m; ++j) {
    BallFamily live;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] >= 1) {
        live.balls.push_back({cover.pairs[i].word, static_cast<int>(cover.pairs[i].word.size())});
        idx.push_back(i);
      }
    BallFamily picked = vitali_select(live);
    for (const auto& ball : picked.balls)
      for (std::size_t q = 0; q < idx.size(); ++q)
        if (live.balls[q] == ball) {
          --v[idx[q]];
          break;
        }
    rounds.push_back(std::move(picked));
  }
  return rounds;
}

FrostmanResult frostman_measure(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D) {
  check_depths(N, D);
  ExplicitTree t = explicit_tree(sys, k, D);
  if (t.atoms.empty()) throw ValidationError("K has no atoms at depth " + std::to_string(D));
  // V(w) = min(b(|w|) if |w| >= N, sum V(children)), children processed first.
  std::vector<double> V(t.nodes.size(), 0.0);
  for (std::size_t i = t.nodes.size(); i-- > 0;) {
    const auto& nd = t.nodes[i];
    int depth = static_cast<int>(nd.word.size());
    if (depth == D) {
      V[i] = b(D);
      continue;
    }
    double s = 0;
    for (int c : nd.children) s += V[static_cast<std::size_t>(c)];
    V[i] = depth >= N ? std::min(b(depth), s) : s;
  }
  std::vector<double> mass(t.nodes.size(), 0.0);
  mass[0] = V[0];
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& nd = t.nodes[i];
    double s = 0;
    for (int c : nd.children) s += V[static_cast<std::size_t>(c)];
    for (int c : nd.children) mass[static_cast<std::size_t>(c)] = mass[i] * V[static_cast<std::size_t>(c)] / s;
  }
  FrostmanResult r;
  r.c = V[0];
  r.measure.depth = D;
  double total = 0;
  for (int a : t.atoms) total += mass[static_cast<std::size_t>(a)];
  for (int a : t.atoms) r.measure.atoms.emplace_back(t.nodes[static_cast<std::size_t>(a)].word, mass[static_cast<std::size_t>(a)] / total);
  return r;
}

FrostmanResult frostman_measure_lp(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D) {
  check_depths(N, D);
  ExplicitTree t = explicit_tree(sys, k, D);
  if (t.atoms.empty()) throw ValidationError("K has no atoms at depth " + std::to_string(D));
  // max sum mu_a  s.t.  mu([w]) <= b(|w|) for |w| in [N, D]; written as a minimisation.
  LinearProgram lp;
  lp.num_vars = static_cast<int>(t.atoms.size());
  lp.objective.assign(t.atoms.size(), -1.0);
  std::vector<int> atom_var(t.nodes.size(), -1);
  for (std::size_t j = 0; j < t.atoms.size(); ++j) atom_var[static_cast<std::size_t>(t.atoms[j])] = static_cast<int>(j);
  std::vector<std::vector<int>> below(t.nodes.size());
  for (std::size_t j = 0; j < t.atoms.size(); ++j)
    for (int v = t.atoms[j]; v >= 0; v = t.nodes[static_cast<std::size_t>(v)].parent)
      below[static_cast<std::size_t>(v)].push_back(static_cast<int>(j));
  for (std::size_t v = 0; v < t.nodes.size(); ++v) {
    int depth = static_cast<int>(t.nodes[v].word.size());
    if (depth < N) continue;
    LinearProgram::Row row;
    row.sense = Sense::le;
    row.rhs = b(depth);
    for (int j : below[v]) row.coeffs.emplace_back(j, 1.0);
    lp.rows.push_back(std::move(row));
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw CertificationError("Frostman LP not solved to optimality");
  FrostmanResult r;
  r.c = -sol.value;
  r.measure.depth = D;
  for (std::size_t j = 0; j < t.atoms.size(); ++j)
    r.measure.atoms.emplace_back(t.nodes[static_cast<std::size_t>(t.atoms[j])].word, std::max(0.0, sol.x[j]) / r.c);
  return r;
}

GaugeSearchResult nonnull_gauge_search(const SubshiftSystem& sys, const CylinderSet& k, const std::vector<Gauge>& chain,
                                       int N, int D, double threshold, int horizon) {
  check_depths(N, D);
  if (horizon <= 0) horizon = std::max(4 * D, 64);
  GaugeSearchResult r;
  r.threshold = threshold;
  r.cuts = choose_cutpoints(chain, horizon);
  Gauge b = stitch_gauges(chain, r.cuts, horizon);
  r.value = frostman_measure(sys, k, b, N, D).c;
  if (r.value >= threshold) {
    r.accepted = true;
    r.gauge = b;
    return r;
  }
  for (const auto& g : chain) {
    CoverValue cv = min_cover_value(sys, k, g, N, D);
    r.refusal.push_back({g.describe(), cv.value, cv.witness});
  }
  return r;
}

}  // namespace entrodim
