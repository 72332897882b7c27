#include "entrodim/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "entrodim/error.hpp"
#include "entrodim/interval.hpp"

namespace entrodim {

LogisticMap::LogisticMap(double a) : a_(a) {
  if (!(a >= 0 && a <= 4)) throw ValidationError("a: must lie in [0, 4]");
}

namespace {

std::string show(const Interval& i) {
  std::ostringstream os;
  os.precision(21);
  os << "[" << i.lo << ", " << i.hi << "]";
  return os.str();
}

// Merges two sorted interval lists; equal point intervals are one point,
// any other overlap cannot be resolved.
std::vector<Interval> merge_distinct(const std::vector<Interval>& x, const std::vector<Interval>& y, double a) {
  std::vector<Interval> all;
  all.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(all),
             [](const Interval& p, const Interval& q) { return p.lo < q.lo || (p.lo == q.lo && p.hi < q.hi); });
  std::vector<Interval> out;
  out.reserve(all.size());
  for (const auto& iv : all) {
    if (!out.empty() && out.back().overlaps(iv)) {
      if (out.back().is_point() && iv.is_point() && out.back().lo == iv.lo) continue;
      std::ostringstream os;
      os.precision(17);
      os << "lap count inconclusive at a = " << a << ": turning-point enclosures " << show(out.back()) << " and "
         << show(iv) << " overlap";
      throw CertificationError(os.str());
    }
    out.push_back(iv);
  }
  return out;
}

}  // namespace

LapTable lap_table(const LogisticMap& map, int n_max) {
  if (n_max < 1 || n_max > kMaxLapDepth)
    throw ValidationError("n_max: must lie in [1, " + std::to_string(kMaxLapDepth) + "]");
  LapTable t;
  t.a = map.a();
  if (map.a() == 0) {
    t.laps.assign(static_cast<std::size_t>(n_max), 1);
    return t;
  }
  const long double a = map.a();
  std::vector<Interval> all{{0.5L, 0.5L}};
  std::vector<Interval> level = all;
  t.laps.push_back(1 + all.size());
  for (int k = 1; k < n_max; ++k) {
    std::vector<Interval> next;
    for (const auto& z : level) {
      Preimages p = logistic_preimages(a, z);
      switch (p.status) {
        case BranchStatus::none:
          break;
        case BranchStatus::single:
          next.push_back(p.left);
          break;
        case BranchStatus::two:
          next.push_back(p.left);
          next.push_back(p.right);
          break;
        case BranchStatus::ambiguous: {
          std::ostringstream os;
          os.precision(17);
          os << "lap count inconclusive at a = " << map.a() << ": discriminant enclosure " << show(p.discriminant)
             << " contains 0";
          throw CertificationError(os.str());
        }
      }
    }
    std::sort(next.begin(), next.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    std::vector<Interval> merged = merge_distinct(all, next, map.a());
    // Points already known have known preimages; only fresh ones propagate.
    std::vector<Interval> fresh;
    std::set_difference(next.begin(), next.end(), all.begin(), all.end(), std::back_inserter(fresh),
                        [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    fresh.erase(std::unique(fresh.begin(), fresh.end(),
                            [](const Interval& p, const Interval& q) { return p.lo == q.lo && p.hi == q.hi; }),
                fresh.end());
    all = std::move(merged);
    level = std::move(fresh);
    t.laps.push_back(1 + all.size());
  }
  return t;
}

std::uint64_t lap_number(const LogisticMap& map, int n) {
  if (n < 1) throw ValidationError("n: must be >= 1");
  return lap_table(map, n).at(n);
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Slope of log f(k) over k in [from, to].
template <class F>
double growth_slope(int from, int to, F&& f) {
  std::vector<double> x, y;
  for (int k = from; k <= to; ++k) {
    x.push_back(k);
    y.push_back(std::log(static_cast<double>(f(k))));
  }
  return ls_slope(x, y);
}

int window_start(int n_max, int divisor) { return std::min(n_max - 1, n_max - n_max / divisor); }

}  // namespace

LogisticEntropy logistic_entropy(const LogisticMap& map, int n_max) {
  if (n_max < 6) throw ValidationError("n_max: must be >= 6");
  LogisticEntropy e;
  e.table = lap_table(map, n_max);
  auto laps = [&](int n) { return e.table.at(n); };
  e.window_from = window_start(n_max, 3);
  e.estimate = growth_slope(e.window_from, n_max, laps);
  double lo = e.estimate, hi = e.estimate;
  for (int div : {2, 4}) {
    double s = growth_slope(window_start(n_max, div), n_max, laps);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  e.error = hi - lo;
  return e;
}

ScanReport monotonicity_report(std::vector<ScanPoint> points, double slack) {
  ScanReport r;
  r.slack = slack;
  r.points = std::move(points);
  for (std::size_t i = 0; i + 1 < r.points.size(); ++i)
    if (r.points[i].h > r.points[i + 1].h + slack) r.flagged.push_back(static_cast<int>(i));
  return r;
}

ScanReport entropy_monotonicity_scan(const std::vector<double>& grid, int n_max, double slack) {
  std::vector<ScanPoint> pts;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0 && grid[i] <= 4)) throw ValidationError("grid[" + std::to_string(i) + "]: must lie in [0, 4]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("grid[" + std::to_string(i) + "]: must increase");
    auto e = logistic_entropy(LogisticMap(grid[i]), n_max);
    pts.push_back({grid[i], e.estimate, e.error});
  }
  return monotonicity_report(std::move(pts), slack);
}

namespace {

struct Image {
  double lo, hi;
};

constexpr int kMaxBurnIn = 64;
constexpr double kMacroscopic = 0.25;

Image image(const LogisticMap& g, Image j) {
  double p = g(j.lo), q = g(j.hi);
  Image r{std::min(p, q), std::max(p, q)};
  if (j.lo <= 0.5 && 0.5 <= j.hi) r.hi = g.a() / 4;
  return r;
}

bool small_enough(const LogisticMap& g, double x, double y, int k, double eps) {
  Image j{x, y};
  for (int i = 0; i < k; ++i) {
    if (j.hi - j.lo > eps) return false;
    if (i + 1 < k) j = image(g, j);
  }
  return true;
}

std::uint64_t cell_count(const LogisticMap& g, double alpha, double beta, int k, double eps) {
  std::uint64_t cells = 0;
  double x = alpha, step = eps;
  while (x < beta) {
    ++cells;
    if (small_enough(g, x, beta, k, eps)) break;
    // Grow until the cell fails, then bisect the boundary.
    double good = x, bad = beta;
    double w = std::max(step, 1e-300);
    for (;;) {
      double y = x + w;
      if (y >= beta) break;
      if (small_enough(g, x, y, k, eps)) {
        good = y;
        w *= 2;
      } else {
        bad = y;
        break;
      }
    }
    for (int it = 0; it < 60 && bad - good > 1e-15 * std::max(1.0, std::abs(good)); ++it) {
      double mid = 0.5 * (good + bad);
      if (small_enough(g, x, mid, k, eps))
        good = mid;
      else
        bad = mid;
    }
    if (good <= x) good = std::nextafter(x, beta);
    step = (good - x) / 2;
    x = good;
  }
  return cells;
}

}  // namespace

IntervalEntropy interval_entropy(const LogisticMap& map, double alpha, double beta, int n, double epsilon) {
  if (!(alpha >= 0 && beta <= 1)) throw ValidationError("sub: must lie inside [0, 1]");
  if (!(alpha < beta)) throw ValidationError("sub: degenerate interval (alpha >= beta)");
  int m;
  double mant = std::frexp(epsilon, &m);
  if (!(epsilon > 0) || mant != 0.5 || -(m - 1) < 1 || -(m - 1) > 20)
    throw ValidationError("epsilon: must be 2^-m with 1 <= m <= 20");
  if (n < 6) throw ValidationError("n: must be >= 6");
  IntervalEntropy r;
  r.n = n;
  r.epsilon = epsilon;
  // A short interval first grows at the local expansion rate, which can
  // exceed the entropy; counting starts once its image is macroscopic.
  Image img{alpha, beta};
  int burn = 0;
  while (burn < kMaxBurnIn && img.hi - img.lo < kMacroscopic) {
    Image next = image(map, img);
    if (next.hi - next.lo <= img.hi - img.lo) break;
    img = next;
    ++burn;
  }
  r.burn_in = burn;
  int last = burn + n;
  int from = burn + window_start(n, 2);
  for (int k = from; k <= last; ++k) r.counts.emplace_back(k, cell_count(map, alpha, beta, k, epsilon));
  auto count = [&](int k) { return r.counts[static_cast<std::size_t>(k - from)].second; };
  r.estimate = growth_slope(burn + window_start(n, 3), last, count);
  double lo = r.estimate, hi = r.estimate;
  for (int div : {2, 4}) {
    double sl = growth_slope(burn + window_start(n, div), last, count);
    lo = std::min(lo, sl);
    hi = std::max(hi, sl);
  }
  r.error = hi - lo;
  return r;
}

}  // namespace entrodim
