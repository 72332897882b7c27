#pragma once

namespace entrodim {

// Closed interval of long doubles with outward-rounded endpoints.
struct Interval {
  long double lo = 0;
  long double hi = 0;
  bool is_point() const { return lo == hi; }
  bool overlaps(const Interval& o) const { return !(hi < o.lo || o.hi < lo); }
};

enum class BranchStatus { none, single, two, ambiguous };

struct Preimages {
  BranchStatus status = BranchStatus::none;
  Interval left;   // on [0, 1/2]
  Interval right;  // on [1/2, 1]
  Interval discriminant;
};

// Encloses the solutions y in [0,1] of a y (1 - y) = z for z in the given
// interval: y = (1 -+ sqrt(1 - 4 z / a)) / 2. The discriminant is computed
// with directed rounding; exact zero yields the single point 1/2.
Preimages logistic_preimages(long double a, const Interval& z);

}  // namespace entrodim
