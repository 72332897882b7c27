#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entrodim/coverpack.hpp"
#include "entrodim/gauge.hpp"
#include "entrodim/symdyn.hpp"

namespace entrodim {

struct WeightedPair {
  Word word;
  double coefficient = 0;
};

struct WeightedCover {
  std::vector<WeightedPair> pairs;
  double value = 0;
  int depth = 0;
  int N = 0;
};

// Probability on the depth-D cylinders; atoms sorted lexicographically.
struct TreeMeasure {
  int depth = 0;
  std::vector<std::pair<Word, double>> atoms;
  double mass(std::span<const int> w) const;  // sum over atoms extending w
};

// Nodes of the word tree meeting K, depths 0..D, in depth-first order.
struct ExplicitTree {
  struct Node {
    Word word;
    int parent = -1;
    std::vector<int> children;
  };
  std::vector<Node> nodes;
  std::vector<int> atoms;  // indices of depth-D nodes
};

inline constexpr std::size_t kExplicitTreeLimit = 1u << 20;

ExplicitTree explicit_tree(const SubshiftSystem& sys, const CylinderSet& k, int D,
                           std::size_t node_limit = kExplicitTreeLimit);

// Fractional covers of K's depth-D atoms by cylinders of length in [N, D].
WeightedCover weighted_cover_value(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D);

struct SandwichReport {
  double lower = 0;  // tripled-ball cover value
  double W = 0;
  double upper = 0;  // ordinary cover value
  bool holds = false;
};

SandwichReport sandwich_check(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D);

// m-round Vitali extraction of a rational weighted cover. Coefficients are
// read as fractions with denominator at most max_denominator.
std::vector<BallFamily> round_weighted_cover(const SubshiftSystem& sys, const WeightedCover& cover, double t,
                                             long long max_denominator = 1000000);

struct FrostmanResult {
  TreeMeasure measure;
  double c = 0;
};

// Dual optimum by tree max-flow: mass is pushed down the tree and split in
// proportion to the children's cover values.
FrostmanResult frostman_measure(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D);

// The same dual solved by the simplex code; returns whichever vertex it finds.
FrostmanResult frostman_measure_lp(const SubshiftSystem& sys, const CylinderSet& k, const Gauge& b, int N, int D);

struct RefusalEntry {
  std::string gauge;
  double cover_cost = 0;
  BallFamily witness;
};

struct GaugeSearchResult {
  bool accepted = false;
  std::optional<Gauge> gauge;
  double value = 0;
  double threshold = 0;
  std::vector<int> cuts;
  std::vector<RefusalEntry> refusal;
  // Refusals only see total covers at finite depth.
  std::string certificate = "finite-depth total cover (weaker than the null-remainder condition)";
};

GaugeSearchResult nonnull_gauge_search(const SubshiftSystem& sys, const CylinderSet& k, const std::vector<Gauge>& chain,
                                       int N, int D, double threshold = 0.01, int horizon = 0);

}  // namespace entrodim
