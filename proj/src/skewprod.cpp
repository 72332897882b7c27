#include "entrodim/skewprod.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "entrodim/error.hpp"
#include "entrodim/jet.hpp"
#include "entrodim/quadratic.hpp"

namespace entrodim {

namespace {

using StepJet = Jet<kMaxStepDerivative>;

StepJet step_jet(double t) {
  StepJet x = StepJet::variable(t);
  StepJet one = StepJet::constant(1.0);
  StepJet f = exp(-(one / x));
  StepJet g = exp(-(one / (one - x)));
  return f / (f + g);
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  double f = std::exp(-1 / t), g = std::exp(-1 / (1 - t));
  return f / (f + g);
}

double smooth_step_derivative(double t, int k) {
  if (k < 0 || k > kMaxStepDerivative) throw ValidationError("derivative order out of range");
  if (k == 0) return smooth_step(t);
  if (t <= 0 || t >= 1) return 0;
  return step_jet(t).derivative(static_cast<std::size_t>(k));
}

double smooth_step_bound(int k) {
  static std::once_flag once;
  static std::array<double, kMaxStepDerivative + 1> bound{};
  std::call_once(once, [] {
    const int n = 20000;
    std::array<int, kMaxStepDerivative + 1> arg{};
    for (int i = 1; i < n; ++i) {
      StepJet j = step_jet(static_cast<double>(i) / n);
      for (int k2 = 0; k2 <= kMaxStepDerivative; ++k2) {
        double d = std::abs(j.derivative(static_cast<std::size_t>(k2)));
        if (d > bound[static_cast<std::size_t>(k2)]) {
          bound[static_cast<std::size_t>(k2)] = d;
          arg[static_cast<std::size_t>(k2)] = i;
        }
      }
    }
    // Refine around each sampled maximum.
    for (int k2 = 0; k2 <= kMaxStepDerivative; ++k2) {
      double c = static_cast<double>(arg[static_cast<std::size_t>(k2)]) / n;
      for (int i = -1000; i <= 1000; ++i) {
        double t = c + static_cast<double>(i) / (1000.0 * n);
        if (t <= 0 || t >= 1) continue;
        double d = std::abs(step_jet(t).derivative(static_cast<std::size_t>(k2)));
        bound[static_cast<std::size_t>(k2)] = std::max(bound[static_cast<std::size_t>(k2)], d);
      }
    }
  });
  if (k < 0 || k > kMaxStepDerivative) throw ValidationError("derivative order out of range");
  return bound[static_cast<std::size_t>(k)];
}

void PlateauSpec::validate() const {
  if (P < 2) throw ValidationError("P: must be >= 2");
  if (P + 1 > kMaxStepDerivative)
    throw ValidationError("P: at most " + std::to_string(kMaxStepDerivative - 1) + " plateaus are supported");
  if (static_cast<int>(u.size()) < P || static_cast<int>(v.size()) < P)
    throw ValidationError("u, v: need at least P entries");
  double prev = 0;
  for (int n = 0; n < P; ++n) {
    double un = u[static_cast<std::size_t>(n)], vn = v[static_cast<std::size_t>(n)];
    if (!(un > prev)) throw ValidationError("u[" + std::to_string(n) + "]: must exceed the previous endpoint");
    if (!(vn > un)) throw ValidationError("v[" + std::to_string(n) + "]: must exceed u[" + std::to_string(n) + "]");
    if (!(vn < 1)) throw ValidationError("v[" + std::to_string(n) + "]: must be < 1");
    prev = vn;
  }
  for (std::size_t i = 0; i < e_gaps.size(); ++i)
    if (!(e_gaps[i] > 0 && e_gaps[i] <= 1))
      throw ValidationError("e_gaps[" + std::to_string(i) + "]: must lie in (0, 1]");
}

PlateauSpec geometric_plateau_spec(double lambda, int P) {
  if (!(lambda > 0 && lambda < 2)) throw ValidationError("lambda: must lie in (0, 2)");
  PlateauSpec s;
  s.P = P;
  for (int n = 1; n <= P; ++n) {
    s.u.push_back(1 - lambda * std::ldexp(1.0, 1 - 2 * n));
    s.v.push_back(1 - lambda * std::ldexp(1.0, -2 * n));
  }
  return s;
}

PlateauSpec default_plateau_spec() {
  PlateauSpec s = geometric_plateau_spec(0.1, 6);
  for (int k = 4; k <= 4000; ++k) s.e_gaps.push_back(std::exp2(-k / 4.0));
  return s;
}

int SmoothProfile::locate(double x, double& t, double& len) const {
  // Positive p: transition p. Negative: plateau -p.
  for (int p = 1; p <= P_ + 1; ++p) {
    auto [l, r] = transition(p);
    if (x <= r) {
      if (x >= l) {
        len = r - l;
        t = (x - l) / len;
        return p;
      }
      return -(p - 1);
    }
  }
  return P_ + 1;
}

std::pair<double, double> SmoothProfile::transition(int p) const {
  double l = p == 1 ? 0.0 : v(p - 1);
  double r = p == P_ + 1 ? 1.0 : u(p);
  return {l, r};
}

double SmoothProfile::gap(double x) const {
  if (x <= 0) return 1;
  if (x >= 1) return 0;
  double t = 0, len = 0;
  int p = locate(x, t, len);
  if (p < 0) return tail_[static_cast<std::size_t>(-p)];
  return tail_[static_cast<std::size_t>(p)] + inc_[static_cast<std::size_t>(p - 1)] * smooth_step(1 - t);
}

double SmoothProfile::value(double x) const {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double t = 0, len = 0;
  int p = locate(x, t, len);
  if (p == 1) return inc_[0] * smooth_step(t);
  return 1 - gap(x);
}

double SmoothProfile::derivative(double x, int k) const {
  if (k == 0) return value(x);
  if (x <= 0 || x >= 1) return 0;
  double t = 0, len = 0;
  int p = locate(x, t, len);
  if (p < 0) return 0;
  return inc_[static_cast<std::size_t>(p - 1)] * smooth_step_derivative(t, k) / std::pow(len, k);
}

namespace {

void refresh_tails(std::vector<double>& tail, const std::vector<double>& inc) {
  // Summed from the smallest increment up.
  std::size_t n = inc.size();
  tail.assign(n + 1, 0.0);
  for (std::size_t p = n; p-- > 0;) tail[p] = tail[p + 1] + inc[p];
}

}  // namespace

SmoothProfile build_psi(const PlateauSpec& spec) {
  spec.validate();
  SmoothProfile s;
  s.P_ = spec.P;
  s.u_.assign(spec.u.begin(), spec.u.begin() + spec.P);
  s.v_.assign(spec.v.begin(), spec.v.begin() + spec.P);
  s.raw_.push_back(0.5);
  s.bounds_.push_back(1 - s.v_[0]);
  for (int p = 2; p <= spec.P + 1; ++p) {
    double len = p <= spec.P ? s.u_[static_cast<std::size_t>(p - 1)] - s.v_[static_cast<std::size_t>(p - 2)]
                             : 1 - s.v_[static_cast<std::size_t>(spec.P - 1)];
    double vp = p <= spec.P ? s.v_[static_cast<std::size_t>(p - 1)] : s.v_[static_cast<std::size_t>(spec.P - 1)];
    double bound = (1 - vp) / p;
    double d = s.raw_.back() / 4;  // strictly inside the ratio condition d_p < d_{p-1}/2
    auto fits = [&](double dd) {
      for (int j = 1; j <= p; ++j)
        if (!(dd * smooth_step_bound(j) / std::pow(len, j) < bound)) return false;
      return true;
    };
    while (!fits(d)) {
      d /= 2;
      if (d < 1e-300) throw CertificationError("increment d_" + std::to_string(p) + " underflows before the derivative bound holds");
    }
    s.raw_.push_back(d);
    s.bounds_.push_back(bound);
  }
  s.raw_total_ = 0;
  for (auto it = s.raw_.rbegin(); it != s.raw_.rend(); ++it) s.raw_total_ += *it;
  for (double d : s.raw_) s.inc_.push_back(d / s.raw_total_);
  refresh_tails(s.tail_, s.inc_);
  s.tail_[0] = 1;
  return s;
}

SmoothProfile retarget_plateaus(const SmoothProfile& psi, const std::vector<double>& e_gaps,
                                const std::function<bool(double)>& admissible) {
  SmoothProfile out = psi;
  const int P = psi.P_;
  std::vector<double> gaps = e_gaps;
  for (std::size_t i = 0; i < gaps.size(); ++i)
    if (!(gaps[i] > 0 && gaps[i] <= 1)) throw ValidationError("e_gaps[" + std::to_string(i) + "]: must lie in (0, 1]");
  std::sort(gaps.begin(), gaps.end(), std::greater<>());
  gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
  // tau[i] = 1 - gamma_i of the input, with gamma_{P+1} = 1.
  std::vector<double> tau(psi.tail_);
  int prev = 0;
  for (int step = 1;; ++step) {
    int th = step == 1 ? 2 : prev + 2;
    if (th > P) break;
    double limit = tau[static_cast<std::size_t>(th)];
    double chosen = -1;
    for (double g : gaps) {
      if (!(g < limit)) continue;
      if (admissible && !admissible(4 - 4 * g)) continue;
      chosen = g;
      break;
    }
    if (chosen < 0)
      throw ValidationError("no admissible target c with gamma_" + std::to_string(th) + " < c < 1 (gap interval (0, " +
                               std::to_string(limit) + "))");
    int i = th;
    while (i + 1 <= P && tau[static_cast<std::size_t>(i + 1)] >= chosen) ++i;
    out.tail_[static_cast<std::size_t>(i)] = chosen;
    out.inc_[static_cast<std::size_t>(i - 1)] = out.tail_[static_cast<std::size_t>(i - 1)] - chosen;
    out.inc_[static_cast<std::size_t>(i)] = chosen - out.tail_[static_cast<std::size_t>(i + 1)];
    out.retargets_.push_back({step, i, chosen});
    prev = i;
  }
  return out;
}

bool entropy_proxy_passes(double a) {
  static std::mutex mu;
  static std::map<double, bool> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(a);
    if (it != memo.end()) return it->second;
  }
  LogisticMap g(a);
  double global = logistic_entropy(g, 14).estimate;
  double local = interval_entropy(g, 0.3, 0.4, 14, 1.0 / 256).estimate;
  bool ok = std::abs(local - global) <= 0.07;
  std::lock_guard<std::mutex> lock(mu);
  memo[a] = ok;
  return ok;
}

SmoothProfile default_profile() {
  PlateauSpec spec = default_plateau_spec();
  return retarget_plateaus(build_psi(spec), spec.e_gaps, entropy_proxy_passes);
}

SkewMap::SkewMap(SmoothProfile profile) : profile_(std::move(profile)) {
  for (int i = 0; i <= 1000; ++i) {
    double v = profile_.value(i / 1000.0);
    if (!(v >= 0 && v <= 1)) throw ValidationError("profile: a(x) leaves [0, 4] near x = " + std::to_string(i / 1000.0));
  }
}

double SkewMap::a(double x) const { return 4 - 4 * profile_.gap(x); }

std::pair<double, double> SkewMap::operator()(double x, double y) const { return {x, a(x) * y * (1 - y)}; }

SkewMap skew_map(const SmoothProfile& profile) { return SkewMap(profile); }

SliceUpper diagonal_slice_entropy_upper(const SmoothProfile& profile, int j, int n_max) {
  if (j < 2) throw ValidationError("j: must be >= 2");
  SliceUpper r;
  r.j = j;
  r.x = 1 - 1.0 / j;
  r.a = skew_map(profile).a(r.x);
  auto e = logistic_entropy(LogisticMap(r.a), n_max);
  r.upper = e.estimate;
  r.error = e.error;
  r.margin = std::log(2.0) - r.upper;
  return r;
}

SliceLower diagonal_full_entropy_lower(const SmoothProfile& profile, int i, int n, double epsilon) {
  if (i < 1 || i > profile.plateaus())
    throw ValidationError("i: plateau " + std::to_string(i) + " not in the registry (1.." + std::to_string(profile.plateaus()) + ")");
  SliceLower r;
  r.i = i;
  r.a = 4 - 4 * profile.alpha_gap(i);
  auto e = interval_entropy(LogisticMap(r.a), profile.u(i), profile.v(i), n, epsilon);
  r.lower = e.estimate;
  r.error = e.error;
  return r;
}

}  // namespace entrodim
