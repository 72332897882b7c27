#pragma once

#include <string>
#include <variant>
#include <vector>

namespace entrodim {

// Positive nonincreasing function on the positive integers; b(n) is the
// cost charged to one Bowen ball of order n.
class Gauge {
 public:
  struct Exp {
    double rate;
  };
  // values[0] = b(1); past the table b decays as last * exp(-tail_rate * k).
  struct Table {
    std::vector<double> values;
    double tail_rate;
  };
  // pieces[p] is active on [starts[p], starts[p+1]); starts[0] == 1.
  struct Piecewise {
    std::vector<int> starts;
    std::vector<Gauge> pieces;
  };

  static Gauge exp(double s);
  static Gauge table(std::vector<double> values, double tail_rate);
  static Gauge piecewise(std::vector<int> starts, std::vector<Gauge> pieces);

  double operator()(int n) const;

  // Checks positivity and monotonicity on [1, horizon].
  void validate(int horizon) const;

  const auto& repr() const { return repr_; }
  std::string describe() const;

 private:
  std::variant<Exp, Table, Piecewise> repr_;
};

Gauge exp_gauge(double s);

struct DominanceReport {
  bool holds = false;
  std::vector<double> ratios;  // ratios[n-1] = b_star(n) / b(n)
  double final_ratio = 0;
};

// b_star << b: the ratio falls below tol by the horizon and is nonincreasing
// over the last quarter of the evaluated range.
DominanceReport dominates(const Gauge& b, const Gauge& b_star, int horizon, double tol);

// Cut points l_1 < l_2 < ... so that b_{p+1} < b_p on [l_{p+1}, horizon].
std::vector<int> choose_cutpoints(const std::vector<Gauge>& chain, int horizon,
                                  double tol = 1e-6);

// b = b_p on [l_p, l_{p+1}) with l_0 = 1.
Gauge stitch_gauges(const std::vector<Gauge>& chain, const std::vector<int>& cuts,
                    int horizon);

}  // namespace entrodim
