#include "entrodim/localent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <thread>
#include <variant>

#include "entrodim/coverpack.hpp"
#include "entrodim/error.hpp"

namespace entrodim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string at(const char* what, std::size_t i) { return std::string(what) + "[" + std::to_string(i) + "]"; }

double uniform(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

int draw(const std::vector<double>& probs, std::mt19937_64& rng) {
  double u = uniform(rng), acc = 0;
  int last = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0) continue;
    acc += probs[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  return last;
}

// Power iteration on (A + I) so periodic chains still converge.
std::vector<double> perron(const std::vector<std::vector<double>>& A, bool left) {
  std::size_t M = A.size();
  std::vector<double> v(M, 1.0 / static_cast<double>(M)), nx(M);
  for (int it = 0; it < 1000000; ++it) {
    for (std::size_t i = 0; i < M; ++i) {
      double s = v[i];
      for (std::size_t j = 0; j < M; ++j) s += (left ? A[j][i] * v[j] : A[i][j] * v[j]);
      nx[i] = s;
    }
    double norm = std::accumulate(nx.begin(), nx.end(), 0.0);
    double diff = 0;
    for (std::size_t i = 0; i < M; ++i) {
      nx[i] /= norm;
      diff = std::max(diff, std::abs(nx[i] - v[i]));
    }
    v.swap(nx);
    if (diff < 1e-17) break;
  }
  return v;
}

std::mt19937_64 sample_rng(std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

template <class F>
void parallel_for(int count, int jobs, F f) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += jobs) f(i);
    });
  for (auto& th : pool) th.join();
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double half_width(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double m = mean(v), ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return 1.96 * std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// -(1/n)(log mu[x|n] - shift) over the window; min and max.
std::pair<double, double> tails(const MarkovMeasure& mu, std::span<const int> x, Window w, double shift) {
  double lm = 0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int n = 1; n <= w.hi; ++n) {
    lm += n == 1 ? std::log(mu.pi()[static_cast<std::size_t>(x[0])])
                 : std::log(mu.P()[static_cast<std::size_t>(x[static_cast<std::size_t>(n - 2)])]
                                  [static_cast<std::size_t>(x[static_cast<std::size_t>(n - 1)])]);
    if (n < w.lo) continue;
    double v = -(lm - shift) / n;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

// Draws from mu conditioned on a union of prefix cylinders.
struct Conditioned {
  std::vector<Word> words;
  std::vector<double> masses;
  double total = 0;

  Conditioned(const MarkovMeasure& mu, const CylinderSet& s) {
    CylinderSet sn = s.normalized();
    for (const auto& c : sn.cylinders()) {
      double m = std::exp(mu.log_mass(c.word));
      words.push_back(c.word);
      masses.push_back(m);
      total += m;
    }
  }

  Word sample(const MarkovMeasure& mu, int L, std::mt19937_64& rng) const {
    return mu.extend(words[static_cast<std::size_t>(draw(masses, rng))], L, rng);
  }
};

void require_one_sided_prefixes(const CylinderSet& s, const char* what) {
  for (std::size_t i = 0; i < s.cylinders().size(); ++i)
    if (s.cylinders()[i].anchor != 0) throw ValidationError(at(what, i) + ": anchor must be 0");
}

}  // namespace

MarkovMeasure MarkovMeasure::bernoulli(std::vector<double> probs) {
  std::vector<std::vector<double>> P(probs.size(), probs);
  return from_matrix(std::move(P), probs);
}

MarkovMeasure MarkovMeasure::parry(const SubshiftSystem& sys) {
  std::size_t M = static_cast<std::size_t>(sys.alphabet());
  std::vector<std::vector<double>> A(M, std::vector<double>(M));
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) A[i][j] = sys.transitions()[i][j];
  auto r = perron(A, false), l = perron(A, true);
  double lambda = 0;
  for (std::size_t j = 0; j < M; ++j) lambda += A[0][j] * r[j];
  lambda /= r[0];
  for (std::size_t i = 0; i < M; ++i)
    if (!(r[i] > 1e-12 && l[i] > 1e-12)) throw ValidationError("system: the maximal-entropy measure needs an irreducible matrix");
  std::vector<std::vector<double>> P(M, std::vector<double>(M, 0.0));
  std::vector<double> pi(M);
  double z = 0;
  for (std::size_t i = 0; i < M; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < M; ++j) row += P[i][j] = A[i][j] * r[j] / (lambda * r[i]);
    for (std::size_t j = 0; j < M; ++j) P[i][j] /= row;
    z += pi[i] = l[i] * r[i];
  }
  for (double& p : pi) p /= z;
  return from_matrix(std::move(P), std::move(pi));
}

MarkovMeasure MarkovMeasure::from_matrix(std::vector<std::vector<double>> P, std::vector<double> pi) {
  std::size_t M = P.size();
  if (M == 0) throw ValidationError("P: must be non-empty");
  for (std::size_t i = 0; i < M; ++i) {
    if (P[i].size() != M) throw ValidationError(at("P", i) + ": row length must be " + std::to_string(M));
    double s = 0;
    for (std::size_t j = 0; j < M; ++j) {
      if (!(P[i][j] >= 0 && P[i][j] <= 1)) throw ValidationError(at("P", i) + at("", j) + ": must lie in [0, 1]");
      s += P[i][j];
    }
    if (std::abs(s - 1) > 1e-12) throw ValidationError(at("P", i) + ": row must sum to 1");
  }
  if (pi.empty()) {
    std::vector<std::vector<double>> Q = P;
    pi = perron(Q, true);
  }
  if (pi.size() != M) throw ValidationError("pi: length must be " + std::to_string(M));
  double s = 0;
  for (std::size_t i = 0; i < M; ++i) {
    if (!(pi[i] >= 0)) throw ValidationError(at("pi", i) + ": must be >= 0");
    s += pi[i];
  }
  if (std::abs(s - 1) > 1e-12) throw ValidationError("pi: must sum to 1");
  for (std::size_t j = 0; j < M; ++j) {
    double v = 0;
    for (std::size_t i = 0; i < M; ++i) v += pi[i] * P[i][j];
    if (std::abs(v - pi[j]) > 1e-12) throw ValidationError(at("pi", j) + ": not stationary for P");
  }
  MarkovMeasure m;
  m.P_ = std::move(P);
  m.pi_ = std::move(pi);
  return m;
}

bool MarkovMeasure::respects(const SubshiftSystem& sys) const {
  if (sys.alphabet() != alphabet()) return false;
  for (int i = 0; i < alphabet(); ++i)
    for (int j = 0; j < alphabet(); ++j)
      if (P_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0 && !sys.allowed(i, j)) return false;
  return true;
}

double MarkovMeasure::log_mass(std::span<const int> w) const {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k] < 0 || w[k] >= alphabet()) throw ValidationError(at("word", k) + ": symbol out of range");
  if (w.empty()) return 0;
  double lm = std::log(pi_[static_cast<std::size_t>(w[0])]);
  for (std::size_t k = 1; k < w.size() && lm > kNegInf; ++k)
    lm += std::log(P_[static_cast<std::size_t>(w[k - 1])][static_cast<std::size_t>(w[k])]);
  return lm;
}

Word MarkovMeasure::extend(Word prefix, int L, std::mt19937_64& rng) const {
  if (prefix.empty() && L > 0) prefix.push_back(draw(pi_, rng));
  while (static_cast<int>(prefix.size()) < L) prefix.push_back(draw(P_[static_cast<std::size_t>(prefix.back())], rng));
  return prefix;
}

double ball_measure(const MarkovMeasure& mu, std::span<const int> x, int n) {
  if (n < 0 || n > static_cast<int>(x.size())) throw ValidationError("n: must lie in [0, |x|]");
  return std::exp(mu.log_mass(x.first(static_cast<std::size_t>(n))));
}

double entropy_rate(const MarkovMeasure& mu) {
  double h = 0;
  for (int i = 0; i < mu.alphabet(); ++i)
    for (int j = 0; j < mu.alphabet(); ++j) {
      double p = mu.P()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (p > 0) h -= mu.pi()[static_cast<std::size_t>(i)] * p * std::log(p);
    }
  return h;
}

void Window::validate() const {
  if (lo < 1) throw ValidationError("window.lo: must be >= 1");
  if (hi < lo) throw ValidationError("window.hi: must be >= window.lo");
}

LocalEntropySample local_entropy(const MarkovMeasure& mu, std::span<const int> x, Window w) {
  w.validate();
  if (static_cast<int>(x.size()) < w.hi) throw ValidationError("x: needs at least window.hi symbols");
  LocalEntropySample s;
  s.window = w;
  double lm = mu.log_mass(x.first(static_cast<std::size_t>(w.lo)));
  for (int n = w.lo; n <= w.hi; ++n) {
    if (n > w.lo)
      lm += std::log(mu.P()[static_cast<std::size_t>(x[static_cast<std::size_t>(n - 2)])]
                           [static_cast<std::size_t>(x[static_cast<std::size_t>(n - 1)])]);
    if (lm == kNegInf) throw ValidationError("x: zero ball mass at n = " + std::to_string(n) + " (point off support)");
    s.values.push_back(-lm / n);
  }
  s.lower = *std::min_element(s.values.begin(), s.values.end());
  s.upper = *std::max_element(s.values.begin(), s.values.end());
  return s;
}

MonteCarloEntropy measure_entropy(const MarkovMeasure& mu, int samples, Window w, std::uint64_t seed, int jobs) {
  if (samples < 1) throw ValidationError("samples: must be >= 1");
  w.validate();
  std::vector<double> lo(static_cast<std::size_t>(samples)), hi(lo.size());
  parallel_for(samples, jobs, [&](int i) {
    auto rng = sample_rng(seed, i);
    Word x = mu.sample(w.hi, rng);
    auto [a, b] = tails(mu, x, w, 0.0);
    lo[static_cast<std::size_t>(i)] = a;
    hi[static_cast<std::size_t>(i)] = b;
  });
  MonteCarloEntropy r;
  r.upper = mean(hi);
  r.lower = mean(lo);
  r.half_width_upper = half_width(hi);
  r.half_width_lower = half_width(lo);
  r.seed = seed;
  r.samples = samples;
  r.window = w;
  return r;
}

VariationalReport variational_gap(const SubshiftSystem& sys, const CylinderSet& z,
                                  const std::vector<MarkovMeasure>& candidates, int depth, double tol,
                                  const SamplingOptions& opt) {
  if (sys.sided() != Sidedness::one) throw ValidationError("sided: needs a one-sided system");
  z.validate(sys);
  opt.window.validate();
  if (opt.window.lo < z.max_length()) throw ValidationError("window.lo: must be >= the longest cylinder of Z");
  VariationalReport rep;
  rep.h_B = bowen_entropy(sys, z, half_schedule({depth})).estimate;
  rep.tol = tol;
  double best = kNegInf;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const MarkovMeasure& mu = candidates[c];
    CandidateRow row;
    row.index = static_cast<int>(c);
    if (!mu.respects(sys)) {
      row.skipped = true;
      row.notice = "support leaves the system";
      rep.rows.push_back(row);
      continue;
    }
    Conditioned cond(mu, z);
    row.mass = cond.total;
    if (!(cond.total > 0)) {
      row.skipped = true;
      row.notice = "mu(Z) = 0";
      rep.rows.push_back(row);
      continue;
    }
    double shift = std::log(cond.total);
    std::vector<double> lo(static_cast<std::size_t>(opt.samples)), hi(lo.size());
    parallel_for(opt.samples, opt.jobs, [&](int i) {
      auto rng = sample_rng(opt.seed + c, i);
      Word x = cond.sample(mu, opt.window.hi, rng);
      auto [a, b] = tails(mu, x, opt.window, shift);
      lo[static_cast<std::size_t>(i)] = a;
      hi[static_cast<std::size_t>(i)] = b;
    });
    row.lower = mean(lo);
    row.upper = mean(hi);
    row.half_width = half_width(lo);
    row.holds = row.lower <= rep.h_B + tol;
    rep.holds = rep.holds && row.holds;
    if (row.lower > best) {
      best = row.lower;
      rep.achiever = row.index;
    }
    rep.rows.push_back(row);
  }
  rep.gap = rep.achiever >= 0 ? rep.h_B - best : 0;
  return rep;
}

RestrictionReport restrict_and_recheck(const MarkovMeasure& mu, const CylinderSet& z, const CylinderSet& y, double tol,
                                       const SamplingOptions& opt) {
  require_one_sided_prefixes(z, "Z");
  require_one_sided_prefixes(y, "Y");
  if (y.empty()) throw ValidationError("Y: must be non-empty");
  opt.window.validate();
  if (opt.window.lo < y.max_length()) throw ValidationError("window.lo: must be >= the longest cylinder of Y");
  CylinderSet zn = z.normalized();
  for (std::size_t i = 0; i < y.cylinders().size(); ++i)
    if (relation(zn, y.cylinders()[i].word) != Relation::inside) throw ValidationError(at("Y", i) + ": not contained in Z");
  Conditioned cond(mu, y);
  if (!(cond.total > 0)) throw ValidationError("Y: mu(Y) = 0");
  RestrictionReport r;
  r.mass_y = cond.total;
  double shift = std::log(cond.total);
  std::vector<double> mu_lo(static_cast<std::size_t>(opt.samples)), nu_lo(mu_lo.size());
  parallel_for(opt.samples, opt.jobs, [&](int i) {
    auto rng = sample_rng(opt.seed, i);
    Word x = cond.sample(mu, opt.window.hi, rng);
    mu_lo[static_cast<std::size_t>(i)] = tails(mu, x, opt.window, 0.0).first;
    nu_lo[static_cast<std::size_t>(i)] = tails(mu, x, opt.window, shift).first;
  });
  r.mu_lower = mean(mu_lo);
  r.nu_lower = mean(nu_lo);
  for (std::size_t i = 0; i < mu_lo.size(); ++i) r.max_deficit = std::max(r.max_deficit, mu_lo[i] - nu_lo[i]);
  r.holds = r.max_deficit <= tol;
  return r;
}

struct DyadicMeasure::Impl {
  struct Tree {
    TreeMeasure t;
    std::map<Word, double> prefix;  // mass of every prefix of an atom
  };
  struct Bernoulli {
    double p1;
  };
  struct Phase {
    std::vector<bool> free;
  };
  struct Mixture {
    std::vector<double> weights;
    std::vector<DyadicMeasure> parts;
  };
  std::variant<Tree, Bernoulli, Phase, Mixture> v;

  // log mu([w|n]) for n = 1..|w|
  std::vector<double> profile(std::span<const int> w) const {
    std::vector<double> out(w.size());
    if (auto* t = std::get_if<Tree>(&v)) {
      std::size_t D = static_cast<std::size_t>(t->t.depth);
      Word key;
      for (std::size_t n = 1; n <= w.size(); ++n) {
        std::size_t m = std::min(n, D);
        if (key.size() < m) key.push_back(w[n - 1]);
        auto it = t->prefix.find(key);
        double mass = it == t->prefix.end() ? 0.0 : it->second;
        out[n - 1] = std::log(mass) - static_cast<double>(n - m) * std::log(2.0);
      }
    } else if (auto* b = std::get_if<Bernoulli>(&v)) {
      double acc = 0;
      for (std::size_t n = 0; n < w.size(); ++n) out[n] = acc += std::log(w[n] ? b->p1 : 1 - b->p1);
    } else if (auto* ph = std::get_if<Phase>(&v)) {
      double acc = 0;
      for (std::size_t n = 0; n < w.size(); ++n) {
        if (ph->free[n % ph->free.size()]) acc -= std::log(2.0);
        else if (w[n] != 0) acc = kNegInf;
        out[n] = acc;
      }
    } else {
      const auto& mx = std::get<Mixture>(v);
      std::vector<std::vector<double>> parts;
      for (const auto& p : mx.parts) parts.push_back(p.impl_->profile(w));
      for (std::size_t n = 0; n < w.size(); ++n) {
        double top = kNegInf;
        for (std::size_t i = 0; i < parts.size(); ++i) top = std::max(top, std::log(mx.weights[i]) + parts[i][n]);
        if (top == kNegInf) {
          out[n] = top;
          continue;
        }
        double s = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) s += std::exp(std::log(mx.weights[i]) + parts[i][n] - top);
        out[n] = top + std::log(s);
      }
    }
    return out;
  }

  Word sample(int L, std::mt19937_64& rng) const {
    Word w;
    if (auto* t = std::get_if<Tree>(&v)) {
      std::vector<double> m;
      for (const auto& a : t->t.atoms) m.push_back(a.second);
      w = t->t.atoms[static_cast<std::size_t>(draw(m, rng))].first;
      w.resize(std::min<std::size_t>(w.size(), static_cast<std::size_t>(L)));
      while (static_cast<int>(w.size()) < L) w.push_back(uniform(rng) < 0.5 ? 0 : 1);
    } else if (auto* b = std::get_if<Bernoulli>(&v)) {
      for (int n = 0; n < L; ++n) w.push_back(uniform(rng) < b->p1 ? 1 : 0);
    } else if (auto* ph = std::get_if<Phase>(&v)) {
      for (int n = 0; n < L; ++n)
        w.push_back(ph->free[static_cast<std::size_t>(n) % ph->free.size()] && uniform(rng) < 0.5 ? 1 : 0);
    } else {
      const auto& mx = std::get<Mixture>(v);
      w = mx.parts[static_cast<std::size_t>(draw(mx.weights, rng))].impl_->sample(L, rng);
    }
    return w;
  }
};

DyadicMeasure DyadicMeasure::tree(TreeMeasure t) {
  if (t.atoms.empty()) throw ValidationError("atoms: must be non-empty");
  double s = 0;
  for (std::size_t i = 0; i < t.atoms.size(); ++i) {
    const auto& [w, m] = t.atoms[i];
    if (static_cast<int>(w.size()) != t.depth) throw ValidationError(at("atoms", i) + ": length must equal depth");
    for (int d : w)
      if (d != 0 && d != 1) throw ValidationError(at("atoms", i) + ": digits must be 0 or 1");
    if (!(m >= 0)) throw ValidationError(at("atoms", i) + ": mass must be >= 0");
    s += m;
  }
  if (std::abs(s - 1) > 1e-9) throw ValidationError("atoms: masses must sum to 1");
  Impl::Tree tree{std::move(t), {}};
  for (const auto& [w, m] : tree.t.atoms)
    for (std::size_t n = 1; n <= w.size(); ++n) tree.prefix[Word(w.begin(), w.begin() + static_cast<long>(n))] += m;
  DyadicMeasure d;
  d.impl_ = std::make_shared<Impl>(Impl{std::move(tree)});
  return d;
}

DyadicMeasure DyadicMeasure::bernoulli(double p1) {
  if (!(p1 >= 0 && p1 <= 1)) throw ValidationError("p: must lie in [0, 1]");
  DyadicMeasure d;
  d.impl_ = std::make_shared<Impl>(Impl{Impl::Bernoulli{p1}});
  return d;
}

DyadicMeasure DyadicMeasure::phase_periodic(std::vector<bool> free) {
  if (free.empty()) throw ValidationError("free: must be non-empty");
  DyadicMeasure d;
  d.impl_ = std::make_shared<Impl>(Impl{Impl::Phase{std::move(free)}});
  return d;
}

DyadicMeasure DyadicMeasure::mixture(std::vector<std::pair<double, DyadicMeasure>> parts) {
  if (parts.empty()) throw ValidationError("parts: must be non-empty");
  Impl::Mixture mx;
  double s = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!(parts[i].first > 0)) throw ValidationError(at("parts", i) + ".weight: must be > 0");
    s += parts[i].first;
  }
  for (auto& [w, m] : parts) {
    mx.weights.push_back(w / s);
    mx.parts.push_back(std::move(m));
  }
  DyadicMeasure d;
  d.impl_ = std::make_shared<Impl>(Impl{std::move(mx)});
  return d;
}

DyadicMeasure DyadicMeasure::nested_mixture(int terms) {
  if (terms < 1 || terms > 12) throw ValidationError("terms: must lie in [1, 12]");
  std::size_t period = std::size_t{1} << terms;
  std::vector<std::pair<double, DyadicMeasure>> parts;
  for (int n = 1; n <= terms; ++n) {
    // Positions divisible by 2^n are pinned to 0: density 1 - 2^-n, and
    // the pinned sets shrink with n so the supports are nested.
    std::vector<bool> free(period);
    for (std::size_t k = 0; k < period; ++k) free[k] = k % (std::size_t{1} << n) != 0;
    parts.emplace_back(std::ldexp(1.0, -n), phase_periodic(std::move(free)));
  }
  return mixture(std::move(parts));
}

double DyadicMeasure::log_mass(std::span<const int> w) const {
  if (w.empty()) return 0;
  return impl_->profile(w).back();
}

std::vector<double> DyadicMeasure::log_mass_profile(std::span<const int> w) const { return impl_->profile(w); }

Word DyadicMeasure::sample(int L, std::mt19937_64& rng) const { return impl_->sample(L, rng); }

const TreeMeasure* DyadicMeasure::as_tree() const {
  auto* t = std::get_if<Impl::Tree>(&impl_->v);
  return t ? &t->t : nullptr;
}

std::string DyadicMeasure::describe() const {
  struct {
    std::string operator()(const Impl::Tree& t) const {
      return "tree(depth " + std::to_string(t.t.depth) + ", " + std::to_string(t.t.atoms.size()) + " atoms)";
    }
    std::string operator()(const Impl::Bernoulli& b) const { return "bernoulli(" + std::to_string(b.p1) + ")"; }
    std::string operator()(const Impl::Phase& p) const { return "phase(period " + std::to_string(p.free.size()) + ")"; }
    std::string operator()(const Impl::Mixture& m) const { return "mixture(" + std::to_string(m.parts.size()) + ")"; }
  } vis;
  return std::visit(vis, impl_->v);
}

MeasureDimension measure_dimension(const DyadicMeasure& mu, int depth, double alpha, int samples, std::uint64_t seed) {
  if (depth < 2) throw ValidationError("depth: must be >= 2");
  if (!(alpha >= 0 && alpha < 0.5)) throw ValidationError("alpha: must lie in [0, 0.5)");
  if (samples < 1) throw ValidationError("samples: must be >= 1");
  MeasureDimension r;
  r.window = {(depth + 1) / 2, depth};
  r.alpha = alpha;
  auto pointwise = [&](std::span<const int> y) {
    auto prof = mu.log_mass_profile(y.first(static_cast<std::size_t>(depth)));
    double best = std::numeric_limits<double>::infinity();
    for (int n = r.window.lo; n <= r.window.hi; ++n)
      best = std::min(best, -prof[static_cast<std::size_t>(n - 1)] / (n * std::log(2.0)));
    return best + 0.0;  // no -0
  };
  std::vector<std::pair<double, double>> pts;  // (proxy, weight)
  if (const TreeMeasure* t = mu.as_tree()) {
    if (t->depth < depth) throw ValidationError("depth: exceeds the tree depth");
    for (const auto& [w, m] : t->atoms)
      if (m > 0) pts.emplace_back(pointwise(w), m);
  } else {
    r.sampled = true;
    pts.resize(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
      auto rng = sample_rng(seed, i);
      pts[static_cast<std::size_t>(i)] = {pointwise(mu.sample(depth, rng)), 1.0};
    }
  }
  r.points = static_cast<int>(pts.size());
  std::sort(pts.begin(), pts.end());
  double total = 0;
  for (const auto& p : pts) total += p.second;
  // Trimmed essinf and esssup: first values whose cumulative weight passes
  // alpha and 1 - alpha.
  double acc = 0;
  bool have_lower = false;
  r.upper = pts.back().first;
  for (const auto& [v, m] : pts) {
    acc += m / total;
    if (!have_lower && acc > alpha) {
      r.lower = v;
      have_lower = true;
    }
    if (acc >= 1 - alpha - 1e-12) {
      r.upper = v;
      break;
    }
  }
  return r;
}

SliceAudit finite_slice_audit(const SubshiftSystem& sys, const std::vector<CylinderSet>& parts, int depth, double tol) {
  if (parts.empty()) throw ValidationError("parts: must be non-empty");
  CylinderSet all;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      parts[i].validate(sys);
    } catch (const ValidationError& e) {
      throw ValidationError(at("parts", i) + ": " + e.what());
    }
    all = all.united(parts[i]);
  }
  SliceAudit a;
  Schedule sched = half_schedule({depth});
  a.union_h_B = bowen_entropy(sys, all, sched).estimate;
  // At level N the union's cover sum is at most k times the largest part's,
  // which moves the critical exponent by at most log(k)/N.
  a.slack = std::log(static_cast<double>(parts.size())) / sched.back().first;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    SlicePart p{static_cast<int>(i), bowen_entropy(sys, parts[i], sched).estimate, false};
    p.attains = p.h_B >= a.union_h_B - a.slack - tol;
    if (p.attains) a.ties.push_back(p.index);
    a.parts.push_back(p);
  }
  a.attained = !a.ties.empty();
  if (!a.attained)
    a.note = "no part attains the union value at this depth";
  else if (a.ties.size() > 1)
    a.note = "several parts attain the union value";
  else
    a.note = "a finite union always has a part attaining its value; only infinitely many parts can avoid it";
  return a;
}

BlockUnion block_union(const std::vector<SubshiftSystem>& systems) {
  if (systems.empty()) throw ValidationError("systems: must be non-empty");
  int M = 0;
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].sided() != Sidedness::one) throw ValidationError(at("systems", i) + ": must be one-sided");
    M += systems[i].alphabet();
  }
  std::vector<std::vector<int>> A(static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(M), 0));
  std::vector<CylinderSet> parts;
  int off = 0;
  for (const auto& s : systems) {
    std::vector<Word> words;
    for (int a = 0; a < s.alphabet(); ++a) {
      words.push_back({off + a});
      for (int b = 0; b < s.alphabet(); ++b)
        A[static_cast<std::size_t>(off + a)][static_cast<std::size_t>(off + b)] = s.transitions()[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    parts.push_back(CylinderSet::from_words(words));
    off += s.alphabet();
  }
  return {SubshiftSystem(M, std::move(A)), std::move(parts)};
}

}  // namespace entrodim
