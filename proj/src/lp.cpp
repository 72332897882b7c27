#include "entrodim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <boost/multiprecision/cpp_int.hpp>

#include "entrodim/error.hpp"

namespace entrodim {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
struct Num;

template <>
struct Num<double> {
  static constexpr bool exact = false;
  static double from(double v) { return v; }
  static double to(double v) { return v; }
  static bool pos(double v, double eps) { return v > eps; }
  static bool neg(double v, double eps) { return v < -eps; }
  static bool zero(double v, double eps) { return std::abs(v) <= eps; }
};

template <>
struct Num<Rational> {
  static constexpr bool exact = true;
  static Rational from(double v) {
    // Doubles are dyadic rationals, so the conversion is exact.
    int e;
    double m = std::frexp(v, &e);
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    Rational r(mant);
    e -= 53;
    Rational two(2);
    if (e > 0)
      for (int i = 0; i < e; ++i) r *= two;
    else
      for (int i = 0; i < -e; ++i) r /= two;
    return r;
  }
  static double to(const Rational& v) { return static_cast<double>(v); }
  static bool pos(const Rational& v, double) { return v > 0; }
  static bool neg(const Rational& v, double) { return v < 0; }
  static bool zero(const Rational& v, double) { return v == 0; }
};

template <class T>
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp) {
    m_ = static_cast<int>(lp.rows.size());
    n_ = lp.num_vars;
    if (static_cast<int>(lp.objective.size()) != n_) throw ValidationError("lp: objective size mismatch");
    double scale = 1;
    for (double c : lp.objective) scale = std::max(scale, std::abs(c));
    eps_ = 1e-11;
    ceps_ = 1e-12 * scale;

    // Columns: originals, one slack/surplus per inequality, one artificial
    // per ge/eq row. Every row owns a unit column used to read duals.
    flip_.assign(static_cast<std::size_t>(m_), false);
    std::vector<Sense> sense(static_cast<std::size_t>(m_));
    int slack = 0, art = 0;
    for (int i = 0; i < m_; ++i) {
      auto s = lp.rows[static_cast<std::size_t>(i)].sense;
      if (lp.rows[static_cast<std::size_t>(i)].rhs < 0) {
        flip_[static_cast<std::size_t>(i)] = true;
        if (s == Sense::le) s = Sense::ge;
        else if (s == Sense::ge) s = Sense::le;
      }
      sense[static_cast<std::size_t>(i)] = s;
      if (s != Sense::eq) ++slack;
      if (s != Sense::le) ++art;
    }
    art_begin_ = n_ + slack;
    cols_ = art_begin_ + art;
    tab_.assign(static_cast<std::size_t>(m_), std::vector<T>(static_cast<std::size_t>(cols_ + 1), T(0)));
    basis_.assign(static_cast<std::size_t>(m_), -1);
    unit_.assign(static_cast<std::size_t>(m_), -1);
    int sc = n_, ac = art_begin_;
    for (int i = 0; i < m_; ++i) {
      const auto& row = lp.rows[static_cast<std::size_t>(i)];
      T sign = flip_[static_cast<std::size_t>(i)] ? T(-1) : T(1);
      auto& t = tab_[static_cast<std::size_t>(i)];
      for (auto [j, a] : row.coeffs) {
        if (j < 0 || j >= n_) throw ValidationError("lp: variable index out of range in row " + std::to_string(i));
        t[static_cast<std::size_t>(j)] += sign * Num<T>::from(a);
      }
      t[static_cast<std::size_t>(cols_)] = sign * Num<T>::from(row.rhs);
      auto s = sense[static_cast<std::size_t>(i)];
      if (s == Sense::le) {
        t[static_cast<std::size_t>(sc)] = T(1);
        basis_[static_cast<std::size_t>(i)] = unit_[static_cast<std::size_t>(i)] = sc++;
      } else {
        if (s == Sense::ge) t[static_cast<std::size_t>(sc++)] = T(-1);
        t[static_cast<std::size_t>(ac)] = T(1);
        basis_[static_cast<std::size_t>(i)] = unit_[static_cast<std::size_t>(i)] = ac++;
      }
    }
  }

  LpSolution run() {
    LpSolution sol;
    sol.exact = Num<T>::exact;
    // Phase 1: minimise the sum of artificials.
    std::vector<T> c1(static_cast<std::size_t>(cols_), T(0));
    for (int j = art_begin_; j < cols_; ++j) c1[static_cast<std::size_t>(j)] = T(1);
    if (art_begin_ < cols_) {
      set_objective(c1);
      if (!iterate(false)) throw CertificationError("lp: phase 1 unbounded (internal error)");
      T infeas = -obj_[static_cast<std::size_t>(cols_)];
      if (Num<T>::pos(infeas, 1e-9)) {
        sol.status = LpStatus::infeasible;
        sol.pivots = pivots_;
        return sol;
      }
      drive_out_artificials();
    }
    std::vector<T> c2(static_cast<std::size_t>(cols_), T(0));
    for (int j = 0; j < n_; ++j) c2[static_cast<std::size_t>(j)] = Num<T>::from(lp_.objective[static_cast<std::size_t>(j)]);
    set_objective(c2);
    if (!iterate(true)) {
      sol.status = LpStatus::unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = LpStatus::optimal;
    sol.pivots = pivots_;
    sol.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) sol.x[static_cast<std::size_t>(b)] = Num<T>::to(tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols_)]);
    }
    sol.duals.assign(static_cast<std::size_t>(m_), 0.0);
    T value(0);
    for (int i = 0; i < m_; ++i) {
      T y = -obj_[static_cast<std::size_t>(unit_[static_cast<std::size_t>(i)])];
      if (flip_[static_cast<std::size_t>(i)]) y = -y;
      sol.duals[static_cast<std::size_t>(i)] = Num<T>::to(y);
    }
    for (int i = 0; i < m_; ++i) {
      int b = basis_[static_cast<std::size_t>(i)];
      if (b < n_) value += c2[static_cast<std::size_t>(b)] * tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols_)];
    }
    sol.value = Num<T>::to(value);
    return sol;
  }

 private:
  void set_objective(const std::vector<T>& c) {
    obj_.assign(static_cast<std::size_t>(cols_ + 1), T(0));
    for (int j = 0; j < cols_; ++j) obj_[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)];
    for (int i = 0; i < m_; ++i) {
      const T& cb = c[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])];
      if (Num<T>::zero(cb, 0.0)) continue;
      const auto& t = tab_[static_cast<std::size_t>(i)];
      for (int j = 0; j <= cols_; ++j) obj_[static_cast<std::size_t>(j)] -= cb * t[static_cast<std::size_t>(j)];
    }
  }

  // Returns false when unbounded.
  bool iterate(bool bar_artificials) {
    int limit = bar_artificials ? art_begin_ : cols_;
    int degenerate = 0;
    for (;;) {
      bool bland = Num<T>::exact || degenerate > 20;
      int enter = -1;
      T best(0);
      for (int j = 0; j < limit; ++j) {
        const T& r = obj_[static_cast<std::size_t>(j)];
        if (!Num<T>::neg(r, ceps_)) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (enter < 0 || r < best) {
          enter = j;
          best = r;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      T ratio(0);
      for (int i = 0; i < m_; ++i) {
        const T& a = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
        if (!Num<T>::pos(a, eps_)) continue;
        T q = tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(cols_)] / a;
        if (leave < 0 || q < ratio ||
            (q == ratio && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          ratio = q;
        }
      }
      if (leave < 0) return false;
      if (Num<T>::zero(ratio, eps_))
        ++degenerate;
      else
        degenerate = 0;
      pivot(leave, enter);
    }
  }

  void pivot(int r, int c) {
    ++pivots_;
    if (pivots_ > 200000) throw CertificationError("lp: pivot limit exceeded");
    auto& pr = tab_[static_cast<std::size_t>(r)];
    T inv = T(1) / pr[static_cast<std::size_t>(c)];
    for (auto& v : pr) v *= inv;
    pr[static_cast<std::size_t>(c)] = T(1);
    auto eliminate = [&](std::vector<T>& row) {
      T f = row[static_cast<std::size_t>(c)];
      if (Num<T>::zero(f, 0.0)) return;
      for (int j = 0; j <= cols_; ++j) {
        const T& p = pr[static_cast<std::size_t>(j)];
        if (!Num<T>::zero(p, 0.0)) row[static_cast<std::size_t>(j)] -= f * p;
      }
      row[static_cast<std::size_t>(c)] = T(0);
    };
    for (int i = 0; i < m_; ++i)
      if (i != r) eliminate(tab_[static_cast<std::size_t>(i)]);
    eliminate(obj_);
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < art_begin_) continue;
      for (int j = 0; j < art_begin_; ++j)
        if (Num<T>::pos(abs_of(tab_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]), eps_)) {
          pivot(i, j);
          break;
        }
      // Otherwise the row is redundant; its artificial stays basic at zero.
    }
  }

  static T abs_of(const T& v) { return v < T(0) ? T(-v) : v; }

  const LinearProgram& lp_;
  int m_ = 0, n_ = 0, cols_ = 0, art_begin_ = 0, pivots_ = 0;
  double eps_ = 0, ceps_ = 0;
  std::vector<std::vector<T>> tab_;
  std::vector<T> obj_;
  std::vector<int> basis_, unit_;
  std::vector<bool> flip_;
};

// Primal feasibility, dual feasibility and the duality gap, all in doubles.
bool verify(const LinearProgram& lp, const LpSolution& s) {
  if (s.status != LpStatus::optimal) return true;
  double scale = 1;
  for (double c : lp.objective) scale = std::max(scale, std::abs(c));
  const double tol = 1e-8;
  for (double v : s.x)
    if (v < -tol) return false;
  std::vector<double> reduced(lp.objective);
  double dual_value = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    double lhs = 0;
    for (auto [j, a] : row.coeffs) {
      lhs += a * s.x[static_cast<std::size_t>(j)];
      reduced[static_cast<std::size_t>(j)] -= a * s.duals[i];
    }
    double slack_tol = tol * (1 + std::abs(row.rhs));
    double y = s.duals[i];
    switch (row.sense) {
      case Sense::ge:
        if (lhs < row.rhs - slack_tol || y < -tol * scale) return false;
        break;
      case Sense::le:
        if (lhs > row.rhs + slack_tol || y > tol * scale) return false;
        break;
      case Sense::eq:
        if (std::abs(lhs - row.rhs) > slack_tol) return false;
        break;
    }
    dual_value += row.rhs * y;
  }
  for (double r : reduced)
    if (r < -tol * scale) return false;
  return std::abs(dual_value - s.value) <= 1e-9 * (1 + std::abs(s.value)) + 1e-12;
}

}  // namespace

LpSolution solve_lp_exact(const LinearProgram& lp) { return Simplex<Rational>(lp).run(); }

LpSolution solve_lp(const LinearProgram& lp) {
  LpSolution s = Simplex<double>(lp).run();
  if (verify(lp, s)) return s;
  if (lp.num_vars <= kExactFallbackVars) return solve_lp_exact(lp);
  throw CertificationError("lp: floating-point solution failed verification and the program has " +
                           std::to_string(lp.num_vars) + " variables (exact fallback limited to " +
                           std::to_string(kExactFallbackVars) + ")");
}

}  // namespace entrodim
