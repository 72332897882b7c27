#include "entrodim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "entrodim/coverpack.hpp"
#include "entrodim/error.hpp"

namespace entrodim {

ContinuousGauge ContinuousGauge::power(double s) {
  if (!(s >= 0) || !std::isfinite(s)) throw ValidationError("h.s: must be finite and >= 0");
  ContinuousGauge g;
  g.h_ = [s](double t) { return std::pow(t, s); };
  g.name_ = "t^" + std::to_string(s);
  return g;
}

ContinuousGauge ContinuousGauge::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw ValidationError("h.table: need at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [t, h] = points[i];
    if (!(t > 0 && t <= 1 && h > 0)) throw ValidationError("h.table[" + std::to_string(i) + "]: need 0 < t <= 1 and h > 0");
    if (i > 0 && !(t > points[i - 1].first)) throw ValidationError("h.table[" + std::to_string(i) + "]: t must increase");
    if (i > 0 && h < points[i - 1].second) throw ValidationError("h.table[" + std::to_string(i) + "]: h must be nondecreasing");
  }
  ContinuousGauge g;
  g.h_ = [pts = std::move(points)](double t) {
    // Clamped log-log interpolation; outside the table the end slope is used.
    std::size_t i = 1;
    while (i + 1 < pts.size() && pts[i].first < t) ++i;
    double x0 = std::log(pts[i - 1].first), x1 = std::log(pts[i].first);
    double y0 = std::log(pts[i - 1].second), y1 = std::log(pts[i].second);
    double x = std::log(t);
    return std::exp(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
  };
  g.name_ = "table";
  return g;
}

ContinuousGauge ContinuousGauge::custom(std::function<double(double)> h, std::string name) {
  ContinuousGauge g;
  g.h_ = std::move(h);
  g.name_ = std::move(name);
  return g;
}

DyadicSet DyadicSet::unit_interval() { return from_words({{0}, {1}}); }

DyadicSet DyadicSet::golden_mean() {
  DyadicSet d;
  d.allowed = {{1, 1}, {1, 0}};
  d.words = {{0}, {1}};
  return d;
}

DyadicSet DyadicSet::from_words(std::vector<Word> words) {
  DyadicSet d;
  d.words = std::move(words);
  return d;
}

DyadicSet DyadicSet::from_points(std::vector<Word> points) {
  DyadicSet d;
  d.points = std::move(points);
  return d;
}

DyadicSet DyadicSet::united(const DyadicSet& other) const {
  if (allowed != other.allowed) throw ValidationError("union: digit rules differ");
  DyadicSet d = *this;
  d.words.insert(d.words.end(), other.words.begin(), other.words.end());
  d.points.insert(d.points.end(), other.points.begin(), other.points.end());
  return d;
}

void DyadicSet::validate() const {
  if (allowed.size() != 2 || allowed[0].size() != 2 || allowed[1].size() != 2)
    throw ValidationError("allowed: must be 2x2");
  for (const auto& row : allowed)
    for (int v : row)
      if (v != 0 && v != 1) throw ValidationError("allowed: entries must be 0 or 1");
  if (!(allowed[0][0] || allowed[0][1]) || !(allowed[1][0] || allowed[1][1]))
    throw ValidationError("allowed: every digit needs a successor");
  if (words.empty() && points.empty()) throw ValidationError("set: empty");
  auto digits = [](const std::vector<Word>& ws, const char* what) {
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (int d : ws[i])
        if (d != 0 && d != 1) throw ValidationError(std::string(what) + "[" + std::to_string(i) + "]: digits must be 0 or 1");
  };
  digits(words, "words");
  digits(points, "points");
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].empty()) throw ValidationError("words[" + std::to_string(i) + "]: must be non-empty");
    for (std::size_t k = 1; k < words[i].size(); ++k)
      if (!allowed[static_cast<std::size_t>(words[i][k - 1])][static_cast<std::size_t>(words[i][k])])
        throw ValidationError("words[" + std::to_string(i) + "]: violates the digit rule at " + std::to_string(k));
  }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Walks binary prefixes of the set. A prefix lies inside an interval piece
// once that piece's word is a prefix of it; below such a node everything
// depends only on (depth, last digit).
class DyadicWalker {
 public:
  DyadicWalker(const DyadicSet& set, int leaf, std::function<std::optional<double>(int)> cost)
      : set_(set), leaf_(leaf), cost_(std::move(cost)) {
    memo_.assign(static_cast<std::size_t>(leaf + 1), {kNan, kNan});
  }

  double solve() {
    Word p;
    return value(p);
  }

  // False once the witness would exceed `limit` words.
  bool collect(Word& p, std::vector<Word>& out, std::size_t limit) {
    int m = static_cast<int>(p.size());
    auto own = cost_(m);
    if (m == leaf_ || (own && *own <= kids(p))) {
      if (out.size() >= limit) return false;
      out.push_back(p);
      return true;
    }
    for (int d = 0; d < 2; ++d) {
      p.push_back(d);
      bool ok = !meets(p) || collect(p, out, limit);
      p.pop_back();
      if (!ok) return false;
    }
    return true;
  }

 private:
  static constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

  bool digit_ok(const Word& p) const {
    return p.size() < 2 || set_.allowed[static_cast<std::size_t>(p[p.size() - 2])][static_cast<std::size_t>(p.back())];
  }

  bool inside(const Word& p) const {
    if (!digit_ok_all(p)) return false;
    for (const auto& w : set_.words)
      if (w.size() <= p.size() && std::equal(w.begin(), w.end(), p.begin())) return true;
    return false;
  }

  bool digit_ok_all(const Word& p) const {
    for (std::size_t k = 1; k < p.size(); ++k)
      if (!set_.allowed[static_cast<std::size_t>(p[k - 1])][static_cast<std::size_t>(p[k])]) return false;
    return true;
  }

  bool meets(const Word& p) const {
    if (digit_ok_all(p))
      for (const auto& w : set_.words) {
        std::size_t m = std::min(w.size(), p.size());
        if (std::equal(w.begin(), w.begin() + static_cast<long>(m), p.begin())) return true;
      }
    for (const auto& x : set_.points) {
      bool ok = true;
      for (std::size_t k = 0; k < p.size() && ok; ++k) ok = p[k] == (k < x.size() ? x[k] : 0);
      if (ok) return true;
    }
    return false;
  }

  double kids(Word& p) {
    double s = 0;
    for (int d = 0; d < 2; ++d) {
      p.push_back(d);
      if (meets(p)) s += value(p);
      p.pop_back();
    }
    return s;
  }

  double value(Word& p) {
    int m = static_cast<int>(p.size());
    double* slot = nullptr;
    // Points may share the prefix, so memoise only when no point does.
    if (!p.empty() && inside(p) && !point_below(p)) {
      slot = &memo_[static_cast<std::size_t>(m)][static_cast<std::size_t>(p.back())];
      if (!std::isnan(*slot)) return *slot;
    }
    double v;
    auto own = cost_(m);
    if (m == leaf_) {
      v = own ? *own : kInf;
    } else {
      double s = kids(p);
      v = own ? std::min(*own, s) : s;
    }
    if (slot) *slot = v;
    return v;
  }

  bool point_below(const Word& p) const {
    for (const auto& x : set_.points) {
      bool ok = true;
      for (std::size_t k = 0; k < p.size() && ok; ++k) ok = p[k] == (k < x.size() ? x[k] : 0);
      if (ok) return true;
    }
    return false;
  }

  const DyadicSet& set_;
  int leaf_;
  std::function<std::optional<double>(int)> cost_;
  std::vector<std::array<double, 2>> memo_;
};

int mesh_level(double delta) {
  if (!(delta > 0 && delta <= 1)) throw ValidationError("delta: must lie in (0, 1]");
  int n = 0;
  while (std::ldexp(1.0, -n) > delta) ++n;
  return n;
}

}  // namespace

MetricCoverValue hausdorff_value(const DyadicSet& set, const ContinuousGauge& h, double delta, int D,
                                 std::size_t witness_limit) {
  set.validate();
  int n0 = mesh_level(delta);
  if (D < n0) throw ValidationError("D: need 2^-D <= delta");
  DyadicWalker walk(set, D, [&](int m) -> std::optional<double> {
    if (m >= n0) return h(std::ldexp(1.0, -m));
    return std::nullopt;
  });
  MetricCoverValue r;
  r.value = walk.solve();
  r.delta = delta;
  r.depth = D;
  r.gauge = h.name();
  Word p;
  r.witness_complete = walk.collect(p, r.witness, witness_limit);
  return r;
}

DimensionEstimate hausdorff_dimension(const DyadicSet& set, const std::vector<int>& depths) {
  set.validate();
  if (depths.empty()) throw ValidationError("depths: must be non-empty");
  DimensionEstimate e;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    int D = depths[i];
    if (D < 1) throw ValidationError("depths[" + std::to_string(i) + "]: must be >= 1");
    if (i > 0 && D <= depths[i - 1]) throw ValidationError("depths[" + std::to_string(i) + "]: must increase");
    int n0 = (D + 1) / 2;
    auto value = [&](double s) {
      DyadicWalker walk(set, D, [&](int m) -> std::optional<double> {
        if (m >= n0) return std::exp2(-s * m);
        return std::nullopt;
      });
      return walk.solve();
    };
    double s_star = 0;
    if (value(0) > 1) {
      double hi = 1.5;
      while (value(hi) >= 1) hi *= 2;
      s_star = critical_exponent(value, 0.0, hi, 1.0, 1e-10);
    }
    DimensionRow row{D, s_star, 0};
    if (!e.table.empty()) row.delta = s_star - e.table.back().s_star;
    e.table.push_back(row);
  }
  e.estimate = e.table.back().s_star;
  e.delta = std::abs(e.table.back().delta);
  return e;
}

GaugeComparison gauge_comparison_check(const DyadicSet& set, const ContinuousGauge& h1, const ContinuousGauge& h2,
                                       int D, double delta) {
  int n0 = mesh_level(delta);
  GaugeComparison g;
  double prev = kInf;
  for (int n = n0; n <= D; ++n) {
    double t = std::ldexp(1.0, -n);
    double r = h2(t) / h1(t);
    // Scales shrink with n, so the ratio must not grow.
    if (r > prev * (1 + 1e-12)) throw ValidationError("h2/h1 is not decreasing on (0, delta] at t = 2^-" + std::to_string(n));
    prev = r;
    g.ratio_bound = std::max(g.ratio_bound, r);
  }
  g.value_h1 = hausdorff_value(set, h1, delta, D).value;
  g.value_h2 = hausdorff_value(set, h2, delta, D).value;
  g.holds = g.value_h2 <= g.ratio_bound * g.value_h1 * (1 + 1e-12);
  return g;
}

Correspondence doubling_correspondence(const SubshiftSystem& sys, const CylinderSet& e, int depth) {
  if (sys.alphabet() != 2) throw ValidationError("alphabet: the doubling map needs binary digits");
  if (depth < 2) throw ValidationError("depth: must be >= 2");
  e.validate(sys);
  Correspondence c;
  c.h_B = bowen_entropy(sys, e, half_schedule({depth})).estimate;
  DyadicSet d;
  d.allowed = sys.transitions();
  for (const auto& cyl : e.cylinders()) d.words.push_back(cyl.word);
  c.log2_dim = std::log(2.0) * hausdorff_dimension(d, {depth}).estimate;
  c.gap = std::abs(c.h_B - c.log2_dim);
  return c;
}

namespace {

// Covers by columns. A column of order n fixes positions column_start(n)..n-1.
class ColumnWalker {
 public:
  ColumnWalker(const SubshiftSystem& sys, const CylinderSet& e, int N, int D, double s)
      : sys_(sys), e_(e), N_(N), D_(D), s_(s) {
    int M = sys.alphabet();
    reach_.push_back(identity(M));
    memo_.assign(static_cast<std::size_t>(D + 1),
                 std::vector<double>(static_cast<std::size_t>(M * M), std::numeric_limits<double>::quiet_NaN()));
  }

  double solve() {
    double total = 0;
    for (int a = 0; a < sys_.alphabet(); ++a) {
      Word w{a};
      int rel = relation(0, w);
      if (rel) total += value(1, w, rel);
    }
    return total;
  }

 private:
  using Bool = std::vector<std::vector<char>>;

  static Bool identity(int M) {
    Bool b(static_cast<std::size_t>(M), std::vector<char>(static_cast<std::size_t>(M), 0));
    for (int i = 0; i < M; ++i) b[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return b;
  }

  // Whether b can follow a after exactly `steps` transitions.
  bool reachable(int a, int b, int steps) {
    while (static_cast<int>(reach_.size()) <= steps) {
      const Bool& last = reach_.back();
      int M = sys_.alphabet();
      Bool nx(static_cast<std::size_t>(M), std::vector<char>(static_cast<std::size_t>(M), 0));
      for (int i = 0; i < M; ++i)
        for (int k = 0; k < M; ++k)
          if (last[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)])
            for (int j : sys_.successors(k)) nx[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
      reach_.push_back(std::move(nx));
    }
    return reach_[static_cast<std::size_t>(steps)][static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }

  // 0 disjoint, 1 partial, 2 inside. The column word starts at position p0.
  int relation(int p0, const Word& col) {
    int p1 = p0 + static_cast<int>(col.size()) - 1;
    int best = 0;
    for (const auto& c : e_.cylinders()) {
      int q0 = c.anchor, q1 = c.anchor + static_cast<int>(c.word.size()) - 1;
      bool ok = true;
      for (int pos = std::max(p0, q0); pos <= std::min(p1, q1) && ok; ++pos)
        ok = col[static_cast<std::size_t>(pos - p0)] == c.word[static_cast<std::size_t>(pos - q0)];
      if (!ok) continue;
      // Junctions where the cylinder sticks out of the column.
      if (q0 < p0) {
        if (q1 >= p0 - 1) {
          int pos = p0 - 1;
          if (pos <= q1 && !sys_.allowed(c.word[static_cast<std::size_t>(pos - q0)], col.front())) continue;
        } else if (!reachable(c.word.back(), col.front(), p0 - q1)) {
          continue;
        }
      }
      if (q1 > p1) {
        if (q0 <= p1 + 1) {
          int pos = p1 + 1;
          if (pos >= q0 && !sys_.allowed(col.back(), c.word[static_cast<std::size_t>(pos - q0)])) continue;
        } else if (!reachable(col.back(), c.word.front(), q0 - p1)) {
          continue;
        }
      }
      bool inside = q0 >= p0 && q1 <= p1;
      best = std::max(best, inside ? 2 : 1);
      if (best == 2) break;
    }
    return best;
  }

  double value(int n, Word& col, int rel) {
    double* slot = nullptr;
    int M = sys_.alphabet();
    if (rel == 2) {
      slot = &memo_[static_cast<std::size_t>(n)][static_cast<std::size_t>(col.front() * M + col.back())];
      if (!std::isnan(*slot)) return *slot;
    }
    double own = std::exp2(-s_ * n);
    double v;
    if (n == D_) {
      v = own;
    } else {
      int p0 = column_start(n), q0 = column_start(n + 1);
      bool grow_left = q0 < p0;
      double s = 0;
      std::vector<int> lefts;
      if (grow_left) {
        for (int l = 0; l < M; ++l)
          if (sys_.allowed(l, col.front())) lefts.push_back(l);
      } else {
        lefts.push_back(-1);
      }
      for (int l : lefts)
        for (int r : sys_.successors(col.back())) {
          Word child;
          child.reserve(col.size() + 2);
          if (l >= 0) child.push_back(l);
          child.insert(child.end(), col.begin(), col.end());
          child.push_back(r);
          int rc = rel == 2 ? 2 : relation(q0, child);
          if (rc) s += value(n + 1, child, rc);
        }
      v = n >= N_ ? std::min(own, s) : s;
    }
    if (slot) *slot = v;
    return v;
  }

  const SubshiftSystem& sys_;
  const CylinderSet& e_;
  int N_, D_;
  double s_;
  std::vector<Bool> reach_;
  std::vector<std::vector<double>> memo_;
};

}  // namespace

double column_critical_exponent(const SubshiftSystem& sys, const CylinderSet& e, int n) {
  if (n < 1) throw ValidationError("n: must be >= 1");
  e.validate(sys);
  CylinderSet en = e.normalized();
  int N = (n + 1) / 2;
  auto value = [&](double s) { return ColumnWalker(sys, en, N, n, s).solve(); };
  if (value(0) <= 1) return 0;
  double hi = 2 * std::log2(static_cast<double>(sys.alphabet())) + 1;
  while (value(hi) >= 1) hi *= 2;
  return critical_exponent(value, 0.0, hi, 1.0, 1e-10);
}

SqrtMetricReport sqrt_metric_dimension(const SubshiftSystem& sys, const CylinderSet& e, int D) {
  if (sys.sided() != Sidedness::two) throw ValidationError("sided: the sqrt-k metric needs a two-sided system");
  if (D < 8) throw ValidationError("D: must be >= 8");
  e.validate(sys);
  SqrtMetricReport r;
  // n s*(n) tracks log2 of the optimal column-cover count, which grows with
  // column length n - n*; its slope against that length is the dimension.
  std::vector<double> x, y;
  for (int n = (D + 1) / 2; n <= D; ++n) {
    double s = column_critical_exponent(sys, e, n);
    DimensionRow row{n, s, 0};
    if (!r.table.empty()) row.delta = s - r.table.back().s_star;
    r.table.push_back(row);
    x.push_back(n - column_start(n));
    y.push_back(n * s);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  r.dim = sxy / sxx;
  r.raw_s_star = r.table.back().s_star;
  SubshiftSystem fwd = one_sided(sys);
  CylinderSet proj = forward_projection(sys, e);
  r.h_B_over_log2 = bowen_entropy(fwd, proj, half_schedule({D})).estimate / std::log(2.0);
  r.gap = std::abs(r.dim - r.h_B_over_log2);
  r.multiplicity_log2 = -column_start(D) * std::log2(static_cast<double>(sys.alphabet()));
  return r;
}

}  // namespace entrodim
