#include "entrodim/coverpack.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "entrodim/error.hpp"

namespace entrodim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_depths(int N, int D) {
  if (N < 1) throw ValidationError("N: must be >= 1");
  if (N > D) throw ValidationError("N: must not exceed D (N = " + std::to_string(N) + ", D = " + std::to_string(D) + ")");
}

// Optimises over antichains of the word tree restricted to nodes meeting Z.
// A node at depth m may be selected at price cost(m) (absent when not
// allowed); nodes at leaf_depth must be selected. Minimising gives covers,
// maximising gives packings. Nodes strictly inside Z have a subtree that only
// depends on (depth, last symbol) and are memoised on that key.
class TreeOptimizer {
 public:
  TreeOptimizer(const SubshiftSystem& sys, const CylinderSet& z, int leaf_depth,
                std::function<std::optional<double>(int)> cost, bool maximize)
      : sys_(sys), z_(z), leaf_(leaf_depth), cost_(std::move(cost)), max_(maximize) {
    memo_.assign(static_cast<std::size_t>(leaf_ + 1),
                 std::vector<double>(static_cast<std::size_t>(sys.alphabet()), std::nan("")));
  }

  double solve() {
    Word w;
    return value(w, Relation::partial);
  }

  // Selected nodes of one optimal antichain, stops after `limit` entries.
  bool selection(std::vector<Word>& out, std::size_t limit) {
    Word w;
    return collect(w, Relation::partial, out, limit);
  }

 private:
  template <class F>
  void for_children(Word& w, F&& f) {
    auto visit = [&](int b) {
      w.push_back(b);
      Relation r = relation(z_, w);
      if (r != Relation::disjoint) f(w, r);
      w.pop_back();
    };
    if (w.empty()) {
      for (int b = 0; b < sys_.alphabet(); ++b) visit(b);
    } else {
      for (int b : sys_.successors(w.back())) visit(b);
    }
  }

  // Which option wins at this node: true means select the node itself.
  bool take(int m, double children, std::optional<double> own) const {
    if (m == leaf_) return true;
    if (!own) return false;
    return max_ ? *own >= children : *own <= children;
  }

  double children_sum(Word& w) {
    double s = 0;
    for_children(w, [&](Word& c, Relation r) { s += value(c, r); });
    return s;
  }

  double value(Word& w, Relation r) {
    int m = static_cast<int>(w.size());
    double* slot = nullptr;
    if (r == Relation::inside) {
      slot = &memo_[static_cast<std::size_t>(m)][static_cast<std::size_t>(w.back())];
      if (!std::isnan(*slot)) return *slot;
    }
    double v;
    if (m == leaf_) {
      auto c = cost_(m);
      v = c ? *c : (max_ ? 0.0 : kInf);
    } else {
      double s = children_sum(w);
      auto own = cost_(m);
      v = take(m, s, own) ? *own : s;
    }
    if (slot) *slot = v;
    return v;
  }

  bool collect(Word& w, Relation r, std::vector<Word>& out, std::size_t limit) {
    int m = static_cast<int>(w.size());
    auto own = cost_(m);
    bool select;
    if (m == leaf_) {
      select = own.has_value();
    } else {
      double s = children_sum(w);
      select = take(m, s, own);
    }
    (void)r;
    if (select) {
      if (out.size() >= limit) return false;
      out.push_back(w);
      return true;
    }
    if (m == leaf_) return true;
    bool ok = true;
    for_children(w, [&](Word& c, Relation rc) {
      if (ok) ok = collect(c, rc, out, limit);
    });
    return ok;
  }

  const SubshiftSystem& sys_;
  const CylinderSet& z_;
  int leaf_;
  std::function<std::optional<double>(int)> cost_;
  bool max_;
  std::vector<std::vector<double>> memo_;
};

// Extends a word with admissible symbols up to the requested length.
Word extend_to(const SubshiftSystem& sys, Word w, int len) {
  while (static_cast<int>(w.size()) < len) w.push_back(w.empty() ? 0 : sys.successors(w.back()).front());
  return w;
}

// Extends a prefix meeting Z to a word that stays inside some cylinder of Z.
Word extend_into(const CylinderSet& z, Word w) {
  for (const auto& c : z.cylinders())
    if (is_prefix(w, c.word)) return c.word;
  return w;
}

BallFamily family_from(const SubshiftSystem& sys, const CylinderSet& z, const std::vector<Word>& words,
                       int order_shift, double eps) {
  BallFamily f;
  f.epsilon = eps;
  for (const auto& w : words) {
    int order = static_cast<int>(w.size()) + order_shift;
    Word centre = extend_into(z, w);
    f.balls.push_back({extend_to(sys, centre, order), order});
  }
  return f;
}

}  // namespace

CoverValue min_cover_value(const SubshiftSystem& sys, const CylinderSet& z, const Gauge& b, int N, int D,
                           std::size_t witness_limit) {
  check_depths(N, D);
  z.validate(sys);
  CylinderSet zn = z.normalized();
  TreeOptimizer opt(sys, zn, D, [&](int m) -> std::optional<double> {
    if (m >= N) return b(m);
    return std::nullopt;
  }, false);
  CoverValue cv;
  cv.value = opt.solve();
  cv.depth = D;
  cv.N = N;
  cv.epsilon = 0.5;
  std::vector<Word> sel;
  cv.witness_complete = opt.selection(sel, witness_limit);
  if (cv.witness_complete) cv.witness = family_from(sys, zn, sel, 0, 0.5);
  cv.witness.epsilon = 0.5;
  return cv;
}

CoverValue tripled_cover_value(const SubshiftSystem& sys, const CylinderSet& z, const Gauge& b, int N, int D,
                               std::size_t witness_limit) {
  check_depths(N, D);
  z.validate(sys);
  CylinderSet zn = z.normalized();
  // A node at depth m is the tripled ball of order m + 1.
  TreeOptimizer opt(sys, zn, D - 1, [&](int m) -> std::optional<double> {
    if (m + 1 >= N) return b(m + 1);
    return std::nullopt;
  }, false);
  CoverValue cv;
  cv.value = opt.solve();
  cv.depth = D;
  cv.N = N;
  cv.epsilon = 1.5;
  std::vector<Word> sel;
  cv.witness_complete = opt.selection(sel, witness_limit);
  if (cv.witness_complete) cv.witness = family_from(sys, zn, sel, 1, 0.5);
  cv.witness.epsilon = 0.5;
  return cv;
}

PackValue pack_value(const SubshiftSystem& sys, const CylinderSet& z, double s, int N, int D,
                     std::size_t witness_limit) {
  check_depths(N, D);
  if (!(s >= 0) || !std::isfinite(s)) throw ValidationError("s: must be finite and >= 0");
  z.validate(sys);
  CylinderSet zn = z.normalized();
  TreeOptimizer opt(sys, zn, D, [&](int m) -> std::optional<double> {
    if (m >= N) return std::exp(-s * m);
    return std::nullopt;
  }, true);
  PackValue pv;
  pv.value = opt.solve();
  pv.depth = D;
  pv.N = N;
  std::vector<Word> sel;
  pv.witness_complete = opt.selection(sel, witness_limit);
  if (pv.witness_complete) pv.witness = family_from(sys, zn, sel, 0, 0.5);
  return pv;
}

double packing_outer_value(const SubshiftSystem& sys, const CylinderSet& z, double s, int N, int D, int parts,
                           std::size_t max_cylinders) {
  if (parts < 1) throw ValidationError("parts: must be >= 1");
  z.validate(sys);
  CylinderSet zn = z.normalized();
  const auto& cyl = zn.cylinders();
  if (cyl.size() > max_cylinders)
    throw ValidationError("cylinders: " + std::to_string(cyl.size()) + " exceed the partition enumeration bound " +
                          std::to_string(max_cylinders) + "; use parts = 1 or split the set by hand");
  // Restricted growth strings enumerate each set partition once.
  std::size_t k = cyl.size();
  std::vector<int> label(k, 0);
  double best = kInf;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == k) {
      double total = 0;
      for (int g = 0; g < used; ++g) {
        std::vector<Cylinder> part;
        for (std::size_t j = 0; j < k; ++j)
          if (label[j] == g) part.push_back(cyl[j]);
        total += pack_value(sys, CylinderSet(std::move(part)), s, N, D, 0).value;
        if (total >= best) return;
      }
      best = std::min(best, total);
      return;
    }
    for (int g = 0; g <= used && g < parts; ++g) {
      label[i] = g;
      rec(i + 1, std::max(used, g + 1));
    }
  };
  rec(0, 0);
  return best;
}

double critical_exponent(const std::function<double(double)>& value_at, double lo, double hi, double target,
                         double tol) {
  if (!(lo < hi)) throw ValidationError("bracket: lo must be < hi");
  if (!(tol > 0)) throw ValidationError("tol: must be > 0");
  double vlo = value_at(lo), vhi = value_at(hi);
  if (!(vlo > target && target > vhi))
    throw ValidationError("bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] does not straddle the target: values " + std::to_string(vlo) + ", " +
                          std::to_string(vhi));
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (value_at(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Schedule half_schedule(const std::vector<int>& depths) {
  Schedule s;
  for (int d : depths) s.emplace_back((d + 1) / 2, d);
  return s;
}

namespace {

void check_schedule(const Schedule& schedule) {
  if (schedule.empty()) throw ValidationError("schedule: must be non-empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    check_depths(schedule[i].first, schedule[i].second);
    if (i == 0) continue;
    auto [n0, d0] = schedule[i - 1];
    auto [n1, d1] = schedule[i];
    // Nondecreasing in both coordinates, strictly increasing in one.
    if (n1 < n0 || d1 < d0 || (n1 == n0 && d1 == d0))
      throw ValidationError("schedule[" + std::to_string(i) + "]: must increase");
  }
}

// Exponent for one decreasing family of values; 0 when the value at s = 0
// already sits at or below 1 (a single ball suffices).
double exponent_of(const std::function<double(double)>& f, double hi) {
  if (f(0.0) <= 1.0) return 0.0;
  while (f(hi) >= 1.0) hi *= 2;
  return critical_exponent(f, 0.0, hi, 1.0, 1e-10);
}

EntropyEstimate run_schedule(const Schedule& schedule, const std::function<double(int, int)>& at) {
  check_schedule(schedule);
  EntropyEstimate e;
  for (auto [N, D] : schedule) {
    ConvergenceRow row{N, D, at(N, D), 0};
    if (!e.table.empty()) row.delta = row.s_star - e.table.back().s_star;
    e.table.push_back(row);
  }
  e.estimate = e.table.back().s_star;
  e.delta = std::abs(e.table.back().delta);
  return e;
}

}  // namespace

EntropyEstimate bowen_entropy(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule) {
  z.validate(sys);
  CylinderSet zn = z.normalized();
  double hi = std::log(static_cast<double>(sys.alphabet())) + 1;
  return run_schedule(schedule, [&](int N, int D) {
    return exponent_of([&](double s) {
      TreeOptimizer opt(sys, zn, D, [&](int m) -> std::optional<double> {
        if (m >= N) return std::exp(-s * m);
        return std::nullopt;
      }, false);
      return opt.solve();
    }, hi);
  });
}

EntropyEstimate packing_entropy(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule) {
  z.validate(sys);
  CylinderSet zn = z.normalized();
  double hi = std::log(static_cast<double>(sys.alphabet())) + 1;
  return run_schedule(schedule, [&](int N, int D) {
    return exponent_of([&](double s) {
      TreeOptimizer opt(sys, zn, D, [&](int m) -> std::optional<double> {
        if (m >= N) return std::exp(-s * m);
        return std::nullopt;
      }, true);
      return opt.solve();
    }, hi);
  });
}

EntropyEstimate spanning_exponent(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule) {
  z.validate(sys);
  double hi = std::log(static_cast<double>(sys.alphabet())) + 1;
  return run_schedule(schedule, [&](int N, int D) {
    std::vector<double> r;
    for (int n = N; n <= D; ++n) r.push_back(static_cast<double>(spanning_number(sys, z, n)));
    return exponent_of([&](double s) {
      double t = 0;
      for (int n = N; n <= D; ++n) t += r[static_cast<std::size_t>(n - N)] * std::exp(-s * n);
      return t;
    }, hi);
  });
}

Ball tripled_ball(const Ball& ball) {
  return Ball{ball.center, std::max(ball.order - 1, 0)};
}

BallFamily vitali_select(const BallFamily& family) {
  for (std::size_t i = 0; i < family.balls.size(); ++i) {
    const auto& b = family.balls[i];
    if (b.order < 0 || b.order > static_cast<int>(b.center.size()))
      throw ValidationError("balls[" + std::to_string(i) + "]: order must lie in [0, |center|]");
  }
  std::vector<Ball> sorted = family.balls;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Ball& x, const Ball& y) {
    if (x.order != y.order) return x.order < y.order;
    return std::lexicographical_compare(x.prefix().begin(), x.prefix().end(), y.prefix().begin(), y.prefix().end());
  });
  BallFamily out;
  out.epsilon = family.epsilon;
  for (const auto& b : sorted) {
    bool free = std::all_of(out.balls.begin(), out.balls.end(), [&](const Ball& p) { return balls_disjoint(p, b); });
    if (free) out.balls.push_back(b);
  }
  return out;
}

BallFamily finite_disjoint_family(const SubshiftSystem& sys, const CylinderSet& z, double s, int N, double a,
                                  double b, int D) {
  check_depths(N, D);
  if (!(a >= 0 && a < b)) throw ValidationError("(a, b): need 0 <= a < b");
  z.validate(sys);
  CylinderSet zn = z.normalized();
  double sup = pack_value(sys, zn, s, N, D, 0).value;
  if (!(sup > a))
    throw ValidationError("infeasible at depth " + std::to_string(D) + ": achievable supremum " +
                          std::to_string(sup) + " does not exceed a = " + std::to_string(a));
  // Candidates are depth-N cylinders meeting Z in lexicographic order. A
  // candidate that would overshoot b is replaced by its children.
  std::deque<Word> queue;
  std::function<void(Word&)> seed = [&](Word& w) {
    Relation r = relation(zn, w);
    if (r == Relation::disjoint) return;
    if (static_cast<int>(w.size()) == N) {
      queue.push_back(w);
      return;
    }
    auto go = [&](int c) { w.push_back(c); seed(w); w.pop_back(); };
    if (w.empty())
      for (int c = 0; c < sys.alphabet(); ++c) go(c);
    else
      for (int c : sys.successors(w.back())) go(c);
  };
  Word root;
  seed(root);
  const double target = 0.5 * (a + b);
  double sum = 0;
  std::vector<Word> chosen;
  while (!queue.empty() && sum < target) {
    Word w = queue.front();
    queue.pop_front();
    double wt = std::exp(-s * static_cast<double>(w.size()));
    if (sum + wt < b) {
      chosen.push_back(w);
      sum += wt;
      continue;
    }
    if (static_cast<int>(w.size()) >= D) continue;
    std::vector<Word> kids;
    for (int c : sys.successors(w.back())) {
      Word k = w;
      k.push_back(c);
      if (relation(zn, k) != Relation::disjoint) kids.push_back(std::move(k));
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) queue.push_front(*it);
  }
  if (!(sum > a && sum < b))
    throw ValidationError("greedy accumulation reached " + std::to_string(sum) + " outside (" + std::to_string(a) +
                          ", " + std::to_string(b) + "); achievable supremum " + std::to_string(sup));
  return family_from(sys, zn, chosen, 0, 0.5);
}

}  // namespace entrodim
