#include "entrodim/gauge.hpp"

#include <cmath>
#include <sstream>

#include "entrodim/error.hpp"

namespace entrodim {

Gauge Gauge::exp(double s) {
  if (!(s > 0) || !std::isfinite(s)) throw ValidationError("gauge.s: must be a finite number > 0");
  Gauge g;
  g.repr_ = Exp{s};
  return g;
}

Gauge Gauge::table(std::vector<double> values, double tail_rate) {
  if (values.empty()) throw ValidationError("gauge.values: must be non-empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0) || !std::isfinite(values[i]))
      throw ValidationError("gauge.values[" + std::to_string(i) + "]: must be finite and > 0");
    if (i > 0 && values[i] > values[i - 1])
      throw ValidationError("gauge.values[" + std::to_string(i) + "]: gauge must be nonincreasing");
  }
  if (!(tail_rate >= 0) || !std::isfinite(tail_rate))
    throw ValidationError("gauge.tail_rate: must be finite and >= 0");
  Gauge g;
  g.repr_ = Table{std::move(values), tail_rate};
  return g;
}

Gauge Gauge::piecewise(std::vector<int> starts, std::vector<Gauge> pieces) {
  if (starts.empty() || starts.size() != pieces.size())
    throw ValidationError("gauge.segments: need one start per piece");
  if (starts[0] != 1) throw ValidationError("gauge.segments[0].start: must be 1");
  for (std::size_t i = 1; i < starts.size(); ++i)
    if (starts[i] <= starts[i - 1])
      throw ValidationError("gauge.segments[" + std::to_string(i) + "].start: must increase");
  Gauge g;
  g.repr_ = Piecewise{std::move(starts), std::move(pieces)};
  return g;
}

Gauge exp_gauge(double s) { return Gauge::exp(s); }

double Gauge::operator()(int n) const {
  if (n < 1) throw ValidationError("gauge evaluated at n = " + std::to_string(n) + " < 1");
  return std::visit(
      [n](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exp>) {
          return std::exp(-r.rate * n);
        } else if constexpr (std::is_same_v<T, Table>) {
          auto k = static_cast<std::size_t>(n);
          if (k <= r.values.size()) return r.values[k - 1];
          return r.values.back() * std::exp(-r.tail_rate * static_cast<double>(k - r.values.size()));
        } else {
          std::size_t p = 0;
          while (p + 1 < r.starts.size() && r.starts[p + 1] <= n) ++p;
          return r.pieces[p](n);
        }
      },
      repr_);
}

void Gauge::validate(int horizon) const {
  double prev = 0;
  for (int n = 1; n <= horizon; ++n) {
    double v = (*this)(n);
    if (!(v > 0) || !std::isfinite(v))
      throw ValidationError("gauge: b(" + std::to_string(n) + ") is not a positive finite number");
    if (n > 1 && v > prev * (1 + 1e-12))
      throw ValidationError("gauge: not monotone at n = " + std::to_string(n));
    prev = v;
  }
}

std::string Gauge::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Exp>) {
          os << "exp(-" << r.rate << " n)";
        } else if constexpr (std::is_same_v<T, Table>) {
          os << "table(" << r.values.size() << " values, tail " << r.tail_rate << ")";
        } else {
          os << "piecewise(";
          for (std::size_t i = 0; i < r.starts.size(); ++i)
            os << (i ? ", " : "") << "[" << r.starts[i] << ": " << r.pieces[i].describe() << "]";
          os << ")";
        }
      },
      repr_);
  return os.str();
}

DominanceReport dominates(const Gauge& b, const Gauge& b_star, int horizon, double tol) {
  if (horizon < 2) throw ValidationError("horizon: must be >= 2");
  DominanceReport rep;
  rep.ratios.reserve(static_cast<std::size_t>(horizon));
  for (int n = 1; n <= horizon; ++n) rep.ratios.push_back(b_star(n) / b(n));
  rep.final_ratio = rep.ratios.back();
  bool tail_monotone = true;
  int from = horizon - horizon / 4;
  for (int n = from + 1; n <= horizon; ++n) {
    double prev = rep.ratios[static_cast<std::size_t>(n - 2)];
    if (rep.ratios[static_cast<std::size_t>(n - 1)] > prev * (1 + 1e-12)) tail_monotone = false;
  }
  rep.holds = rep.final_ratio < tol && tail_monotone;
  return rep;
}

std::vector<int> choose_cutpoints(const std::vector<Gauge>& chain, int horizon, double tol) {
  if (chain.empty()) throw ValidationError("chain: need at least one gauge");
  std::vector<int> cuts;
  int prev = 1;  // every piece gets at least one index
  for (std::size_t p = 0; p + 1 < chain.size(); ++p) {
    auto rep = dominates(chain[p], chain[p + 1], horizon, tol);
    if (!rep.holds)
      throw ValidationError("chain[" + std::to_string(p) + "] does not dominate chain[" +
                            std::to_string(p + 1) + "] (ratio at horizon " +
                            std::to_string(rep.final_ratio) + ")");
    int last_bad = 0;
    for (int n = horizon; n >= 1; --n)
      if (!(chain[p + 1](n) < chain[p](n))) {
        last_bad = n;
        break;
      }
    int cut = std::max(last_bad + 1, prev + 1);
    cuts.push_back(cut);
    prev = cut;
  }
  return cuts;
}

Gauge stitch_gauges(const std::vector<Gauge>& chain, const std::vector<int>& cuts, int horizon) {
  if (chain.empty()) throw ValidationError("chain: need at least one gauge");
  if (cuts.size() + 1 != chain.size())
    throw ValidationError("cuts: expected " + std::to_string(chain.size() - 1) + " cut points");
  std::vector<int> starts{1};
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (cuts[i] <= starts.back())
      throw ValidationError("cuts[" + std::to_string(i) + "]: must exceed " + std::to_string(starts.back()));
    starts.push_back(cuts[i]);
  }
  Gauge g = Gauge::piecewise(starts, chain);
  for (std::size_t i = 1; i < starts.size(); ++i) {
    int l = starts[i];
    if (g(l) > g(l - 1) * (1 + 1e-12))
      throw ValidationError("seam " + std::to_string(i) + " at n = " + std::to_string(l) +
                            ": stitched gauge increases");
  }
  g.validate(std::max(horizon, starts.back()));
  return g;
}

}  // namespace entrodim
