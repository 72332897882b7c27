#include "entrodim/interval.hpp"

#include <cfenv>
#include <cmath>

namespace entrodim {

namespace {

// Restores the caller's rounding mode on scope exit.
class RoundingGuard {
 public:
  RoundingGuard() : saved_(std::fegetround()) {}
  ~RoundingGuard() { std::fesetround(saved_); }
  RoundingGuard(const RoundingGuard&) = delete;
  RoundingGuard& operator=(const RoundingGuard&) = delete;

 private:
  int saved_;
};

long double down(long double (*f)(long double, long double), long double x, long double y) {
  std::fesetround(FE_DOWNWARD);
  return f(x, y);
}

long double up(long double (*f)(long double, long double), long double x, long double y) {
  std::fesetround(FE_UPWARD);
  return f(x, y);
}

long double add(long double x, long double y) { return x + y; }
long double sub(long double x, long double y) { return x - y; }
long double mul(long double x, long double y) { return x * y; }
long double dvd(long double x, long double y) { return x / y; }

}  // namespace

Preimages logistic_preimages(long double a, const Interval& z) {
  RoundingGuard guard;
  Preimages p;
  // t = 4 z / a, disc = 1 - t
  long double t_lo = down(dvd, down(mul, 4.0L, z.lo), a);
  long double t_hi = up(dvd, up(mul, 4.0L, z.hi), a);
  Interval disc{down(sub, 1.0L, t_hi), up(sub, 1.0L, t_lo)};
  p.discriminant = disc;
  if (disc.hi < 0) return p;
  if (disc.lo == 0 && disc.hi == 0) {
    p.status = BranchStatus::single;
    p.left = p.right = {0.5L, 0.5L};
    return p;
  }
  if (disc.lo <= 0) {
    p.status = BranchStatus::ambiguous;
    return p;
  }
  std::fesetround(FE_DOWNWARD);
  long double r_lo = std::sqrt(disc.lo);
  std::fesetround(FE_UPWARD);
  long double r_hi = std::sqrt(disc.hi);
  // Halving is exact.
  long double h_lo = r_lo / 2, h_hi = r_hi / 2;
  p.left = {down(sub, 0.5L, h_hi), up(sub, 0.5L, h_lo)};
  p.right = {down(add, 0.5L, h_lo), up(add, 0.5L, h_hi)};
  p.status = BranchStatus::two;
  return p;
}

}  // namespace entrodim
