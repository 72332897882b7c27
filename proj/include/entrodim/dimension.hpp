#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entrodim/symdyn.hpp"

namespace entrodim {

// Continuous gauge h(t) for Hausdorff measures.
class ContinuousGauge {
 public:
  static ContinuousGauge power(double s);
  // Log-log linear interpolation through (t, h) pairs, t increasing in (0, 1].
  static ContinuousGauge table(std::vector<std::pair<double, double>> points);
  static ContinuousGauge custom(std::function<double(double)> h, std::string name);

  double operator()(double t) const { return h_(t); }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> h_;
  std::string name_;
};

// Subset of [0, 1] read through binary expansions: the union of the dyadic
// intervals [0.w, 0.w + 2^-|w|] restricted to expansions whose consecutive
// digits obey `allowed`, plus isolated points 0.w000...
struct DyadicSet {
  std::vector<std::vector<int>> allowed{{1, 1}, {1, 1}};
  std::vector<Word> words;
  std::vector<Word> points;

  static DyadicSet unit_interval();
  static DyadicSet golden_mean();
  static DyadicSet from_words(std::vector<Word> words);
  static DyadicSet from_points(std::vector<Word> points);
  DyadicSet united(const DyadicSet& other) const;  // requires equal digit rules
  void validate() const;
};

struct MetricCoverValue {
  double value = 0;
  double delta = 0;
  int depth = 0;
  std::string gauge;
  std::vector<Word> witness;  // dyadic intervals, each of length <= delta
  bool witness_complete = true;  // false when the witness hit the size cap
};

inline constexpr std::size_t kDyadicWitnessLimit = 1u << 16;

MetricCoverValue hausdorff_value(const DyadicSet& set, const ContinuousGauge& h, double delta, int D,
                                 std::size_t witness_limit = kDyadicWitnessLimit);

struct DimensionRow {
  int depth = 0;
  double s_star = 0;
  double delta = 0;
};

struct DimensionEstimate {
  double estimate = 0;
  double delta = 0;
  std::vector<DimensionRow> table;
};

// Critical exponent of t^s-cover values with mesh 2^-ceil(D/2), per depth D.
DimensionEstimate hausdorff_dimension(const DyadicSet& set, const std::vector<int>& depths);

struct GaugeComparison {
  double value_h1 = 0;
  double value_h2 = 0;
  double ratio_bound = 0;  // max of h2/h1 over the dyadic scales in use
  bool holds = false;
};

GaugeComparison gauge_comparison_check(const DyadicSet& set, const ContinuousGauge& h1, const ContinuousGauge& h2,
                                       int D, double delta);

struct Correspondence {
  double h_B = 0;
  double log2_dim = 0;  // log 2 * dim_H
  double gap = 0;
};

// h_B of the doubling map on E (Bowen-ball covers, symbolic) against
// log 2 * dim_H of the matching subset of [0, 1] (dyadic covers).
Correspondence doubling_correspondence(const SubshiftSystem& sys, const CylinderSet& e, int depth);

struct SqrtMetricReport {
  double dim = 0;         // slope of n s*(n) against column length
  double raw_s_star = 0;  // column critical exponent at the final depth
  double h_B_over_log2 = 0;
  double gap = 0;
  double multiplicity_log2 = 0;  // log2 of the M^{sqrt n} column-multiplicity factor at D
  std::vector<DimensionRow> table;
};

// Critical exponent of covers by order-n columns [x_{n*}..x_{n-1}] (diameter
// 2^-n in the sqrt-k metric) with orders in [ceil(n/2), n].
double column_critical_exponent(const SubshiftSystem& sys, const CylinderSet& e, int n);

SqrtMetricReport sqrt_metric_dimension(const SubshiftSystem& sys, const CylinderSet& e, int D);

}  // namespace entrodim
