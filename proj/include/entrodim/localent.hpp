#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entrodim/frostman.hpp"
#include "entrodim/symdyn.hpp"

namespace entrodim {

// Stationary Markov measure on one-sided sequences over {0..M-1}.
class MarkovMeasure {
 public:
  // Product measure with the given symbol probabilities.
  static MarkovMeasure bernoulli(std::vector<double> probs);
  // Maximal-entropy measure of an irreducible subshift.
  static MarkovMeasure parry(const SubshiftSystem& sys);
  // Empty pi means: solve for the stationary vector.
  static MarkovMeasure from_matrix(std::vector<std::vector<double>> P, std::vector<double> pi = {});

  int alphabet() const { return static_cast<int>(pi_.size()); }
  const std::vector<std::vector<double>>& P() const { return P_; }
  const std::vector<double>& pi() const { return pi_; }
  // Every positive transition is allowed in sys.
  bool respects(const SubshiftSystem& sys) const;
  double log_mass(std::span<const int> w) const;  // -inf when the word has no mass
  // Continues a word with positive mass to length L.
  Word extend(Word prefix, int L, std::mt19937_64& rng) const;
  Word sample(int L, std::mt19937_64& rng) const { return extend({}, L, rng); }

 private:
  std::vector<std::vector<double>> P_;
  std::vector<double> pi_;
};

double ball_measure(const MarkovMeasure& mu, std::span<const int> x, int n);
// Shannon entropy rate sum pi_i P_ij log(1/P_ij).
double entropy_rate(const MarkovMeasure& mu);

struct Window {
  int lo = 1000;
  int hi = 2000;
  void validate() const;
};

struct LocalEntropySample {
  Window window;
  std::vector<double> values;  // -(1/n) log mu(B_n(x)) for n = lo..hi
  double lower = 0;            // min over the window
  double upper = 0;            // max over the window
};

LocalEntropySample local_entropy(const MarkovMeasure& mu, std::span<const int> x, Window w);

struct MonteCarloEntropy {
  double upper = 0;
  double lower = 0;
  double half_width_upper = 0;  // 95% normal half-widths
  double half_width_lower = 0;
  std::uint64_t seed = 0;
  int samples = 0;
  Window window;
};

// Per-sample generators are seeded from (seed, index), so the result does
// not depend on jobs.
MonteCarloEntropy measure_entropy(const MarkovMeasure& mu, int samples, Window w, std::uint64_t seed, int jobs = 1);

struct CandidateRow {
  int index = 0;
  bool skipped = false;
  std::string notice;
  double mass = 0;  // mu(Z)
  double lower = 0;
  double upper = 0;
  double half_width = 0;
  bool holds = true;  // lower <= h_B + tol
};

struct VariationalReport {
  double h_B = 0;
  double tol = 0;
  std::vector<CandidateRow> rows;
  int achiever = -1;     // candidate with the largest lower estimate
  double gap = 0;        // h_B - best lower
  bool holds = true;
};

struct SamplingOptions {
  int samples = 200;
  Window window{};
  std::uint64_t seed = 1;
  int jobs = 1;
};

VariationalReport variational_gap(const SubshiftSystem& sys, const CylinderSet& z,
                                  const std::vector<MarkovMeasure>& candidates, int depth, double tol,
                                  const SamplingOptions& opt);

struct RestrictionReport {
  double mass_y = 0;
  double mu_lower = 0;  // mean lower tail of mu at points drawn from nu
  double nu_lower = 0;
  double max_deficit = 0;  // max over points of mu tail - nu tail
  bool holds = true;
};

// nu = mu(. & Y)/mu(Y) with Y inside Z; compares lower local-entropy tails.
RestrictionReport restrict_and_recheck(const MarkovMeasure& mu, const CylinderSet& z, const CylinderSet& y, double tol,
                                       const SamplingOptions& opt);

// Borel measures on [0, 1] seen through binary digits.
class DyadicMeasure {
 public:
  static DyadicMeasure tree(TreeMeasure t);
  static DyadicMeasure bernoulli(double p1);  // P(digit = 1)
  // Digits at positions k with free[k % period] uniform, the rest 0.
  static DyadicMeasure phase_periodic(std::vector<bool> free);
  // Weights are normalised.
  static DyadicMeasure mixture(std::vector<std::pair<double, DyadicMeasure>> parts);
  // sum_{n<=terms} 2^-n mu_{s_n} over nested phase-periodic sets of
  // dimension s_n = 1 - 2^-n, normalised.
  static DyadicMeasure nested_mixture(int terms);

  double log_mass(std::span<const int> w) const;
  // log mu([w|n]) for n = 1..|w|
  std::vector<double> log_mass_profile(std::span<const int> w) const;
  Word sample(int L, std::mt19937_64& rng) const;
  // Atoms with weights when the measure is a finite tree.
  const TreeMeasure* as_tree() const;
  std::string describe() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

struct MeasureDimension {
  double upper = 0;  // trimmed esssup of the pointwise proxy
  double lower = 0;  // trimmed essinf
  Window window;
  double alpha = 0;
  int points = 0;  // atoms or samples used
  bool sampled = false;
};

// Pointwise proxy: min over n in [ceil(D/2), D] of -log2 mu([y|n]) / n.
MeasureDimension measure_dimension(const DyadicMeasure& mu, int depth, double alpha = 0.05, int samples = 2000,
                                   std::uint64_t seed = 1);

struct SlicePart {
  int index = 0;
  double h_B = 0;
  bool attains = false;
};

struct SliceAudit {
  double union_h_B = 0;
  double slack = 0;  // log(#parts)/N, the most a finite union can gain
  std::vector<SlicePart> parts;
  bool attained = false;
  std::vector<int> ties;  // parts attaining the union value
  std::string note;
};

SliceAudit finite_slice_audit(const SubshiftSystem& sys, const std::vector<CylinderSet>& parts, int depth,
                              double tol = 1e-6);

// Disjoint-alphabet union of systems; part i is the set of sequences
// starting in block i.
struct BlockUnion {
  SubshiftSystem sys;
  std::vector<CylinderSet> parts;
};
BlockUnion block_union(const std::vector<SubshiftSystem>& systems);

}  // namespace entrodim
