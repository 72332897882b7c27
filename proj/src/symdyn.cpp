#include "entrodim/symdyn.hpp"

#include <cmath>
#include <limits>

namespace entrodim {

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > std::numeric_limits<std::uint64_t>::max() - b)
    throw ValidationError("word count overflows 64 bits");
  return a + b;
}

}  // namespace

SubshiftSystem::SubshiftSystem(int alphabet, std::vector<std::vector<int>> transitions,
                               Sidedness sided)
    : alphabet_(alphabet), transitions_(std::move(transitions)), sided_(sided) {
  if (alphabet_ < 1) throw ValidationError("alphabet: must be >= 1");
  if (static_cast<int>(transitions_.size()) != alphabet_)
    throw ValidationError("transitions: expected " + std::to_string(alphabet_) + " rows");
  std::vector<int> col(static_cast<std::size_t>(alphabet_), 0);
  successors_.resize(static_cast<std::size_t>(alphabet_));
  for (int a = 0; a < alphabet_; ++a) {
    const auto& row = transitions_[static_cast<std::size_t>(a)];
    if (static_cast<int>(row.size()) != alphabet_)
      throw ValidationError("transitions[" + std::to_string(a) + "]: expected " +
                            std::to_string(alphabet_) + " entries");
    for (int b = 0; b < alphabet_; ++b) {
      int v = row[static_cast<std::size_t>(b)];
      if (v != 0 && v != 1)
        throw ValidationError("transitions[" + std::to_string(a) + "][" + std::to_string(b) +
                              "]: entries must be 0 or 1");
      if (v) {
        successors_[static_cast<std::size_t>(a)].push_back(b);
        ++col[static_cast<std::size_t>(b)];
      }
    }
    if (successors_[static_cast<std::size_t>(a)].empty())
      throw ValidationError("transitions[" + std::to_string(a) + "]: row has no allowed successor");
  }
  for (int b = 0; b < alphabet_; ++b)
    if (col[static_cast<std::size_t>(b)] == 0)
      throw ValidationError("transitions: column " + std::to_string(b) + " has no allowed predecessor");
}

SubshiftSystem SubshiftSystem::full_shift(int alphabet, Sidedness sided) {
  if (alphabet < 1) throw ValidationError("alphabet: must be >= 1");
  std::vector<std::vector<int>> t(static_cast<std::size_t>(alphabet),
                                  std::vector<int>(static_cast<std::size_t>(alphabet), 1));
  return SubshiftSystem(alphabet, std::move(t), sided);
}

SubshiftSystem SubshiftSystem::golden_mean(Sidedness sided) {
  return SubshiftSystem(2, {{1, 1}, {1, 0}}, sided);
}

bool SubshiftSystem::admissible(std::span<const int> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= alphabet_) return false;
    if (i > 0 && !allowed(word[i - 1], word[i])) return false;
  }
  return true;
}

void SubshiftSystem::require_admissible(std::span<const int> word, const std::string& what) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= alphabet_)
      throw ValidationError(what + "[" + std::to_string(i) + "]: symbol " + std::to_string(word[i]) +
                            " outside alphabet of size " + std::to_string(alphabet_));
    if (i > 0 && !allowed(word[i - 1], word[i]))
      throw ValidationError(what + "[" + std::to_string(i) + "]: transition " +
                            std::to_string(word[i - 1]) + "->" + std::to_string(word[i]) +
                            " not allowed");
  }
}

std::vector<std::uint64_t> SubshiftSystem::words_from(int n) const {
  if (n < 1) throw ValidationError("word length must be >= 1");
  std::vector<std::uint64_t> v(static_cast<std::size_t>(alphabet_), 1), next(v.size());
  for (int k = 1; k < n; ++k) {
    for (int a = 0; a < alphabet_; ++a) {
      std::uint64_t s = 0;
      for (int b : successors(a)) s = checked_add(s, v[static_cast<std::size_t>(b)]);
      next[static_cast<std::size_t>(a)] = s;
    }
    v.swap(next);
  }
  return v;
}

bool SubshiftSystem::operator==(const SubshiftSystem& other) const {
  return alphabet_ == other.alphabet_ && transitions_ == other.transitions_ && sided_ == other.sided_;
}

CylinderSet::CylinderSet(std::vector<Cylinder> cylinders) : cylinders_(std::move(cylinders)) {}

CylinderSet CylinderSet::from_words(const std::vector<Word>& words) {
  std::vector<Cylinder> c;
  c.reserve(words.size());
  for (const auto& w : words) c.push_back({w, 0});
  return CylinderSet(std::move(c));
}

CylinderSet CylinderSet::everything(const SubshiftSystem& sys) {
  std::vector<Cylinder> c;
  for (int a = 0; a < sys.alphabet(); ++a) c.push_back({{a}, 0});
  return CylinderSet(std::move(c));
}

int CylinderSet::max_length() const {
  int m = 0;
  for (const auto& c : cylinders_) m = std::max(m, static_cast<int>(c.word.size()));
  return m;
}

void CylinderSet::validate(const SubshiftSystem& sys) const {
  if (cylinders_.empty()) throw ValidationError("cylinders: set is empty");
  for (std::size_t i = 0; i < cylinders_.size(); ++i) {
    const auto& c = cylinders_[i];
    std::string where = "cylinders[" + std::to_string(i) + "]";
    if (c.word.empty()) throw ValidationError(where + ".word: must be non-empty");
    if (sys.sided() == Sidedness::one && c.anchor != 0)
      throw ValidationError(where + ".anchor: one-sided systems require anchor 0");
    sys.require_admissible(c.word, where + ".word");
  }
}

bool is_prefix(std::span<const int> p, std::span<const int> w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

CylinderSet CylinderSet::normalized() const {
  std::vector<Cylinder> c = cylinders_;
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::vector<Cylinder> out;
  for (const auto& x : c) {
    bool covered = false;
    for (const auto& y : c) {
      if (&x == &y || x.anchor != y.anchor) continue;
      if (y.word.size() < x.word.size() && is_prefix(y.word, x.word)) {
        covered = true;
        break;
      }
    }
    if (!covered) out.push_back(x);
  }
  return CylinderSet(std::move(out));
}

CylinderSet CylinderSet::united(const CylinderSet& other) const {
  std::vector<Cylinder> c = cylinders_;
  c.insert(c.end(), other.cylinders_.begin(), other.cylinders_.end());
  return CylinderSet(std::move(c)).normalized();
}

Relation relation(const CylinderSet& z, std::span<const int> w) {
  bool partial = false;
  for (const auto& c : z.cylinders()) {
    if (c.word.size() <= w.size()) {
      if (is_prefix(c.word, w)) return Relation::inside;
    } else if (is_prefix(w, c.word)) {
      partial = true;
    }
  }
  return partial ? Relation::partial : Relation::disjoint;
}

bool balls_disjoint(const Ball& a, const Ball& b) {
  // Two cylinders are disjoint unless one prefix extends the other.
  return !is_prefix(a.prefix(), b.prefix()) && !is_prefix(b.prefix(), a.prefix());
}

bool ball_contains(const Ball& outer, const Ball& inner) {
  return is_prefix(outer.prefix(), inner.prefix());
}

SubshiftSystem one_sided(const SubshiftSystem& sys) {
  return SubshiftSystem(sys.alphabet(), sys.transitions(), Sidedness::one);
}

CylinderSet forward_projection(const SubshiftSystem& sys, const CylinderSet& z) {
  z.validate(sys);
  const int M = sys.alphabet();
  std::vector<Cylinder> out;
  for (const auto& c : z.cylinders()) {
    int k = c.anchor, L = static_cast<int>(c.word.size());
    if (k <= 0 && k + L - 1 >= 0) {
      out.push_back({Word(c.word.begin() + (-k), c.word.end()), 0});
    } else if (k + L - 1 < 0) {
      // x_0 must be reachable from the last fixed symbol in -(k+L-1) steps.
      std::vector<char> reach(static_cast<std::size_t>(M), 0);
      reach[static_cast<std::size_t>(c.word.back())] = 1;
      for (int step = 0; step < -(k + L - 1); ++step) {
        std::vector<char> nx(static_cast<std::size_t>(M), 0);
        for (int a = 0; a < M; ++a)
          if (reach[static_cast<std::size_t>(a)])
            for (int b : sys.successors(a)) nx[static_cast<std::size_t>(b)] = 1;
        reach.swap(nx);
      }
      for (int a = 0; a < M; ++a)
        if (reach[static_cast<std::size_t>(a)]) out.push_back({{a}, 0});
    } else {
      // Anchor k > 0: every admissible filler of positions 0..k-1.
      std::vector<Word> fill{{}};
      for (int pos = 0; pos < k; ++pos) {
        std::vector<Word> nx;
        for (const auto& f : fill) {
          for (int b = 0; b < M; ++b) {
            if (!f.empty() && !sys.allowed(f.back(), b)) continue;
            Word g = f;
            g.push_back(b);
            nx.push_back(std::move(g));
          }
        }
        if (nx.size() > 100000) throw ValidationError("forward projection: too many fillers for anchor " + std::to_string(k));
        fill.swap(nx);
      }
      for (auto& f : fill) {
        if (!sys.allowed(f.back(), c.word.front())) continue;
        f.insert(f.end(), c.word.begin(), c.word.end());
        out.push_back({f, 0});
      }
    }
  }
  return CylinderSet(std::move(out)).normalized();
}

std::uint64_t count_words(const SubshiftSystem& sys, int n) {
  if (n < 0) throw ValidationError("n: must be >= 0");
  if (n == 0) return 1;
  std::uint64_t s = 0;
  for (auto v : sys.words_from(n)) s = checked_add(s, v);
  return s;
}

namespace {

struct SpanCounter {
  const SubshiftSystem& sys;
  const CylinderSet& z;
  int n;
  std::vector<std::vector<std::uint64_t>> ext;  // ext[len][a]: words of length len starting at a

  std::uint64_t walk(Word& w) {
    Relation r = relation(z, w);
    if (r == Relation::disjoint) return 0;
    int d = static_cast<int>(w.size());
    if (d == n) return 1;
    if (r == Relation::inside) return ext[static_cast<std::size_t>(n - d + 1)][static_cast<std::size_t>(w.back())];
    std::uint64_t s = 0;
    auto next = [&](int b) {
      w.push_back(b);
      s = checked_add(s, walk(w));
      w.pop_back();
    };
    if (w.empty()) {
      for (int b = 0; b < sys.alphabet(); ++b) next(b);
    } else {
      for (int b : sys.successors(w.back())) next(b);
    }
    return s;
  }
};

}  // namespace

std::uint64_t spanning_number(const SubshiftSystem& sys, const CylinderSet& z, int n) {
  z.validate(sys);
  if (n < 1) throw ValidationError("n: must be >= 1");
  SpanCounter sc{sys, z, n, {}};
  sc.ext.resize(static_cast<std::size_t>(n) + 1);
  for (int len = 1; len <= n; ++len) sc.ext[static_cast<std::size_t>(len)] = sys.words_from(len);
  Word w;
  return sc.walk(w);
}

double one_sided_distance(std::span<const int> x, std::span<const int> y) {
  std::size_t m = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < m; ++k)
    if (x[k] != y[k]) return std::ldexp(1.0, -static_cast<int>(k));
  return 0.0;
}

double bowen_distance(std::span<const int> x, std::span<const int> y, int n) {
  double d = 0;
  for (int j = 0; j < n && static_cast<std::size_t>(j) < std::min(x.size(), y.size()); ++j)
    d = std::max(d, one_sided_distance(x.subspan(static_cast<std::size_t>(j)), y.subspan(static_cast<std::size_t>(j))));
  return d;
}

int column_start(int n) {
  if (n < 0) throw ValidationError("column order must be >= 0");
  int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n ? -r + 1 : -r;
}

IndeterminateDistance::IndeterminateDistance(double lo, double hi)
    : CertificationError("window too short to determine the distance; it lies in [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "]"),
      lower(lo),
      upper(hi) {}

SqrtDistance sqrt_metric_distance(const TwoSidedWindow& x, const TwoSidedWindow& y) {
  if (!x.has(0) || !y.has(0)) throw ValidationError("windows must contain position 0");
  // cond(k): x_m = y_m for column_start(k) <= m < k. Monotone in k, cond(0) holds.
  int k = 0;
  for (;;) {
    int next = k + 1;
    int lo = column_start(next), hi = next - 1;
    bool decidable = x.has(lo) && y.has(lo) && x.has(hi) && y.has(hi);
    if (!decidable) break;
    bool agree = true;
    for (int m = lo; m <= hi; ++m)
      if (x.at(m) != y.at(m)) {
        agree = false;
        break;
      }
    if (!agree) {
      SqrtDistance d;
      d.exact = true;
      d.agreement = k;
      d.value = d.lower = d.upper = std::ldexp(1.0, -k);
      return d;
    }
    k = next;
  }
  SqrtDistance d;
  d.exact = false;
  d.agreement = k;
  d.lower = 0.0;
  // A visible disagreement at m caps N below the first order whose column holds m.
  int from = std::max(x.first(), y.first()), to = std::min(x.last(), y.last());
  for (int m = from; m <= to; ++m) {
    if (x.at(m) == y.at(m)) continue;
    int kk = k + 1;
    while (!(column_start(kk) <= m && m <= kk - 1)) ++kk;
    d.lower = std::max(d.lower, std::ldexp(1.0, -(kk - 1)));
  }
  d.upper = d.value = std::ldexp(1.0, -k);
  return d;
}

double sqrt_metric_distance_exact(const TwoSidedWindow& x, const TwoSidedWindow& y) {
  auto d = sqrt_metric_distance(x, y);
  if (!d.exact) throw IndeterminateDistance(d.lower, d.upper);
  return d.value;
}

}  // namespace entrodim
