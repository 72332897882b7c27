#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "entrodim/gauge.hpp"
#include "entrodim/symdyn.hpp"

namespace entrodim {

struct CoverValue {
  double value = 0;
  int depth = 0;
  int N = 0;
  double epsilon = 0.5;
  BallFamily witness;
  bool witness_complete = true;  // false when the witness exceeded the size cap
};

struct PackValue {
  double value = 0;
  int depth = 0;
  int N = 0;
  double epsilon = 0.5;
  BallFamily witness;
  bool witness_complete = true;
};

inline constexpr std::size_t kDefaultWitnessLimit = 1u << 16;

// Cheapest cover of Z by cylinders of length n in [N, D], cost b(n) each.
CoverValue min_cover_value(const SubshiftSystem& sys, const CylinderSet& z, const Gauge& b,
                           int N, int D, std::size_t witness_limit = kDefaultWitnessLimit);

// Same problem with tripled balls: the ball of order n is inflated to the
// (n-1)-prefix cylinder (the whole space for n = 1).
CoverValue tripled_cover_value(const SubshiftSystem& sys, const CylinderSet& z, const Gauge& b,
                               int N, int D, std::size_t witness_limit = kDefaultWitnessLimit);

// Heaviest antichain of cylinders of length in [N, D] meeting Z, weight e^{-sn}.
PackValue pack_value(const SubshiftSystem& sys, const CylinderSet& z, double s, int N, int D,
                     std::size_t witness_limit = kDefaultWitnessLimit);

inline constexpr std::size_t kPartitionBound = 10;

// Minimum over partitions of Z's cylinder list into at most `parts` groups of
// the summed pack values.
double packing_outer_value(const SubshiftSystem& sys, const CylinderSet& z, double s, int N, int D,
                           int parts, std::size_t max_cylinders = kPartitionBound);

// Bisection for the s where a decreasing value function crosses target.
double critical_exponent(const std::function<double(double)>& value_at, double lo, double hi,
                         double target = 1.0, double tol = 1e-10);

struct ConvergenceRow {
  int N = 0;
  int D = 0;
  double s_star = 0;
  double delta = 0;  // change from the previous row, 0 on the first
};

struct EntropyEstimate {
  double estimate = 0;
  double delta = 0;
  std::vector<ConvergenceRow> table;
};

using Schedule = std::vector<std::pair<int, int>>;

// (N, D) = (ceil(D/2), D) for each listed depth.
Schedule half_schedule(const std::vector<int>& depths);

EntropyEstimate bowen_entropy(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule);
EntropyEstimate packing_entropy(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule);
// Critical exponent of sum_{n=N}^{D} r_n e^{-sn}, r_n the spanning numbers.
EntropyEstimate spanning_exponent(const SubshiftSystem& sys, const CylinderSet& z, const Schedule& schedule);

// The inflated ball used by Vitali selection.
Ball tripled_ball(const Ball& ball);

// Greedy: minimal order first, lexicographic center among ties.
BallFamily vitali_select(const BallFamily& family);

BallFamily finite_disjoint_family(const SubshiftSystem& sys, const CylinderSet& z, double s,
                                  int N, double a, double b, int D);

}  // namespace entrodim
