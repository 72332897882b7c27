#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace entrodim {

// Flat-ended C-infinity step s(t) = f(t) / (f(t) + f(1 - t)), f(t) = exp(-1/t),
// extended by 0 left of 0 and by 1 right of 1.
double smooth_step(double t);

inline constexpr int kMaxStepDerivative = 10;

// s^(k)(t) for 0 <= k <= kMaxStepDerivative; zero outside (0, 1).
double smooth_step_derivative(double t, int k);

// max over [0, 1] of |s^(k)|, from a dense sample; cached.
double smooth_step_bound(int k);

// Plateaus [u_n, v_n] for n = 1..P. Targets are stored as gaps 1 - c, which
// keeps values that crowd against 1 distinguishable.
struct PlateauSpec {
  std::vector<double> u;
  std::vector<double> v;
  int P = 0;
  std::vector<double> e_gaps;

  void validate() const;
};

// u_n = 1 - lambda 2^{1-2n}, v_n = 1 - lambda 2^{-2n}.
PlateauSpec geometric_plateau_spec(double lambda, int P);
// lambda = 0.1, P = 6, targets at gaps 2^{-k/4}.
PlateauSpec default_plateau_spec();

struct Retarget {
  int step = 0;   // p in the selection c_1, c_2, ...
  int index = 0;  // plateau moved to the new value
  double gap = 0; // 1 - c
};

// Nondecreasing phi on [0, 1] that is constant on every [u_n, v_n], built
// from the transitions phi = alpha_{p-1} + inc_p s((x - v_{p-1}) / L_p). A
// final transition carries v_P up to 1.
class SmoothProfile {
 public:
  double value(double x) const;
  double gap(double x) const;  // 1 - value(x), accurate near 1
  double derivative(double x, int k) const;

  int plateaus() const { return P_; }
  double u(int p) const { return u_[static_cast<std::size_t>(p - 1)]; }
  double v(int p) const { return v_[static_cast<std::size_t>(p - 1)]; }
  // Plateau constant alpha_p and its gap 1 - alpha_p, p = 1..P.
  double alpha(int p) const { return 1 - tail_[static_cast<std::size_t>(p)]; }
  double alpha_gap(int p) const { return tail_[static_cast<std::size_t>(p)]; }
  // Increment of transition p = 1..P+1 after normalisation.
  double increment(int p) const { return inc_[static_cast<std::size_t>(p - 1)]; }
  // Transition p occupies [left, right].
  std::pair<double, double> transition(int p) const;

  // Raw increments d_p before dividing by psi(1); d_1 = 1/2.
  const std::vector<double>& raw_increments() const { return raw_; }
  double raw_total() const { return raw_total_; }
  // Derivative bound (1 - v_p)/p imposed on transition p of psi.
  double raw_bound(int p) const { return bounds_[static_cast<std::size_t>(p - 1)]; }

  const std::vector<Retarget>& retargets() const { return retargets_; }

 private:
  friend SmoothProfile build_psi(const PlateauSpec& spec);
  friend SmoothProfile retarget_plateaus(const SmoothProfile& psi, const std::vector<double>& e_gaps,
                                         const std::function<bool(double)>& admissible);
  int locate(double x, double& t, double& len) const;

  int P_ = 0;
  std::vector<double> u_, v_;
  std::vector<double> inc_;   // P + 1 entries
  std::vector<double> tail_;  // tail_[p] = sum_{k>p} inc_k, p = 0..P+1
  std::vector<double> raw_;
  std::vector<double> bounds_;
  double raw_total_ = 0;
  std::vector<Retarget> retargets_;
};

SmoothProfile build_psi(const PlateauSpec& spec);

// Greedy first-admissible selection: c_1 is the least target above
// gamma_2, c_p the least target above gamma_{n_{p-1}+2}; the plateau whose
// value interval [gamma_i, gamma_{i+1}] holds c_p is moved to c_p. Targets
// rejected by `admissible` (given a = 4 c) are skipped.
SmoothProfile retarget_plateaus(const SmoothProfile& psi, const std::vector<double>& e_gaps,
                                const std::function<bool(double)>& admissible = {});

// Proxy used to vet targets: interval entropy on [0.3, 0.4] within 0.07 of
// the lap entropy at n = 14, epsilon = 1/256. Memoised per parameter.
bool entropy_proxy_passes(double a);

// build_psi + retarget with the proxy, on the default spec.
SmoothProfile default_profile();

// T(x, y) = (x, a(x) y (1 - y)) with a = 4 phi.
class SkewMap {
 public:
  explicit SkewMap(SmoothProfile profile);
  double a(double x) const;
  std::pair<double, double> operator()(double x, double y) const;
  const SmoothProfile& profile() const { return profile_; }

 private:
  SmoothProfile profile_;
};

SkewMap skew_map(const SmoothProfile& profile);

struct SliceUpper {
  int j = 0;
  double x = 0;
  double a = 0;
  double upper = 0;
  double error = 0;
  double margin = 0;  // log 2 - upper
};

// Lap entropy of the fibre map at x = 1 - 1/j.
SliceUpper diagonal_slice_entropy_upper(const SmoothProfile& profile, int j, int n_max = 14);

struct SliceLower {
  int i = 0;
  double a = 0;
  double lower = 0;
  double error = 0;  // slope spread; the estimate may sit above log 2 by this much
  bool proxy_only = true;  // full-entropy status is a numerical proxy, never certified
};

// Interval entropy of g_{a_i} on [u_i, v_i].
SliceLower diagonal_full_entropy_lower(const SmoothProfile& profile, int i, int n = 14, double epsilon = 1.0 / 256);

}  // namespace entrodim
