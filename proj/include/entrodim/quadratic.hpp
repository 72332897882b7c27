#pragma once

#include <cstdint>
#include <vector>

namespace entrodim {

class LogisticMap {
 public:
  explicit LogisticMap(double a);
  double a() const { return a_; }
  double operator()(double y) const { return a_ * y * (1 - y); }

 private:
  double a_;
};

inline constexpr int kMaxLapDepth = 24;

struct LapTable {
  double a = 0;
  std::vector<std::uint64_t> laps;  // laps[n-1] for n = 1..n_max
  int n_max() const { return static_cast<int>(laps.size()); }
  std::uint64_t at(int n) const { return laps[static_cast<std::size_t>(n - 1)]; }
};

// Turning points of g^n are the points y with g^k(y) = 1/2 for some k < n.
// They are isolated with outward-rounded interval arithmetic; a failure to
// separate two of them raises CertificationError.
LapTable lap_table(const LogisticMap& map, int n_max);
std::uint64_t lap_number(const LogisticMap& map, int n);

struct LogisticEntropy {
  double estimate = 0;
  double error = 0;  // spread of the slope over the fitting windows
  int window_from = 0;
  LapTable table;
};

// Least-squares slope of log laps(n) over the final third of 1..n_max.
LogisticEntropy logistic_entropy(const LogisticMap& map, int n_max);

struct ScanPoint {
  double a = 0;
  double h = 0;
  double err = 0;
};

struct ScanReport {
  std::vector<ScanPoint> points;
  std::vector<int> flagged;  // i where h[i] > h[i+1] + slack
  double slack = 0;
  bool clean() const { return flagged.empty(); }
};

ScanReport entropy_monotonicity_scan(const std::vector<double>& grid, int n_max, double slack);
// Flagging step on precomputed points; used directly by perturbation tests.
ScanReport monotonicity_report(std::vector<ScanPoint> points, double slack);

struct IntervalEntropy {
  double estimate = 0;
  double error = 0;  // slope spread over the fitting windows
  int n = 0;
  int burn_in = 0;   // iterates before the image of the interval reached length 1/4
  double epsilon = 0;
  std::vector<std::pair<int, std::uint64_t>> counts;  // (k, cells of d_k-diameter <= epsilon)
};

// Greedy partition of [alpha, beta] into maximal cells J with
// max_{j<k} |g^j(J)| <= epsilon; the estimate is the growth rate of the cell
// count over the final third of k = b+1..b+n, where b iterates bring the
// image of the interval to macroscopic size. epsilon must be 2^-m, 1 <= m <= 20.
IntervalEntropy interval_entropy(const LogisticMap& map, double alpha, double beta, int n, double epsilon);

}  // namespace entrodim
