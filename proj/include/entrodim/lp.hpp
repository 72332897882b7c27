#pragma once

#include <utility>
#include <vector>

namespace entrodim {

enum class Sense { le, ge, eq };

// minimize c.x subject to rows, x >= 0
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    Sense sense = Sense::ge;
    double rhs = 0;
  };
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<Row> rows;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0;
  std::vector<double> x;
  std::vector<double> duals;  // >= 0 on ge rows, <= 0 on le rows
  int pivots = 0;
  bool exact = false;  // solved in rational arithmetic
};

// Floating-point two-phase simplex (Dantzig pricing, Bland's rule once
// degenerate pivots start to repeat). The answer is checked for primal and
// dual feasibility and a zero duality gap; on failure small programs are
// re-solved exactly, larger ones raise CertificationError.
LpSolution solve_lp(const LinearProgram& lp);

// Always rational, Bland's rule throughout.
LpSolution solve_lp_exact(const LinearProgram& lp);

inline constexpr int kExactFallbackVars = 64;

}  // namespace entrodim
