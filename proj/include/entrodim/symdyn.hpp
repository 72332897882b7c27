#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entrodim/error.hpp"

namespace entrodim {

using Word = std::vector<int>;

enum class Sidedness { one, two };

// Subshift of finite type given by a 0/1 transition matrix over {0..M-1}.
class SubshiftSystem {
 public:
  SubshiftSystem(int alphabet, std::vector<std::vector<int>> transitions,
                 Sidedness sided = Sidedness::one);

  static SubshiftSystem full_shift(int alphabet, Sidedness sided = Sidedness::one);
  static SubshiftSystem golden_mean(Sidedness sided = Sidedness::one);

  int alphabet() const { return alphabet_; }
  Sidedness sided() const { return sided_; }
  const std::vector<std::vector<int>>& transitions() const { return transitions_; }
  bool allowed(int a, int b) const { return transitions_[a][b] != 0; }
  const std::vector<int>& successors(int a) const { return successors_[a]; }

  bool admissible(std::span<const int> word) const;
  // Throws ValidationError naming the first bad position.
  void require_admissible(std::span<const int> word, const std::string& what) const;

  // Number of admissible words of length n starting with each symbol.
  std::vector<std::uint64_t> words_from(int n) const;

  bool operator==(const SubshiftSystem& other) const;

 private:
  int alphabet_;
  std::vector<std::vector<int>> transitions_;
  std::vector<std::vector<int>> successors_;
  Sidedness sided_;
};

struct Cylinder {
  Word word;
  int anchor = 0;  // position of word[0]; one-sided cylinders use 0
  bool operator==(const Cylinder&) const = default;
  auto operator<=>(const Cylinder&) const = default;
};

// Finite union of cylinders. normalize() sorts, dedupes and drops cylinders
// contained in another member, so members are pairwise disjoint.
class CylinderSet {
 public:
  CylinderSet() = default;
  explicit CylinderSet(std::vector<Cylinder> cylinders);
  static CylinderSet from_words(const std::vector<Word>& words);
  static CylinderSet everything(const SubshiftSystem& sys);

  const std::vector<Cylinder>& cylinders() const { return cylinders_; }
  bool empty() const { return cylinders_.empty(); }
  std::size_t size() const { return cylinders_.size(); }
  int max_length() const;

  void validate(const SubshiftSystem& sys) const;
  CylinderSet normalized() const;
  CylinderSet united(const CylinderSet& other) const;

 private:
  std::vector<Cylinder> cylinders_;
};

// Where the cylinder [w] (prefix cylinder, anchor 0) sits relative to Z.
enum class Relation { disjoint, partial, inside };
Relation relation(const CylinderSet& z, std::span<const int> w);

bool is_prefix(std::span<const int> p, std::span<const int> w);

// Ball of the Bowen metric d_n at radius 1/2; equals the cylinder of the
// first `order` symbols of `center`.
struct Ball {
  Word center;
  int order = 0;
  std::span<const int> prefix() const { return {center.data(), static_cast<std::size_t>(order)}; }
  bool operator==(const Ball& o) const { return order == o.order && std::equal(prefix().begin(), prefix().end(), o.prefix().begin()); }
};

struct BallFamily {
  std::vector<Ball> balls;
  double epsilon = 0.5;
};

bool balls_disjoint(const Ball& a, const Ball& b);
bool ball_contains(const Ball& outer, const Ball& inner);

// Copy of the system viewed as one-sided.
SubshiftSystem one_sided(const SubshiftSystem& sys);

// Set of forward halves (x_0 x_1 ...) of points of a two-sided cylinder set,
// as a one-sided cylinder set.
CylinderSet forward_projection(const SubshiftSystem& sys, const CylinderSet& z);

std::uint64_t count_words(const SubshiftSystem& sys, int n);
std::uint64_t spanning_number(const SubshiftSystem& sys, const CylinderSet& z, int n);

// d(x, y) = 2^-min{k : x_k != y_k}; sequences compared on their common length,
// equal prefixes give 0.
double one_sided_distance(std::span<const int> x, std::span<const int> y);
double bowen_distance(std::span<const int> x, std::span<const int> y, int n);

// Finite view of a two-sided sequence: symbols[i] sits at position offset + i.
struct TwoSidedWindow {
  int offset = 0;
  Word symbols;
  int first() const { return offset; }
  int last() const { return offset + static_cast<int>(symbols.size()) - 1; }
  bool has(int pos) const { return pos >= first() && pos <= last(); }
  int at(int pos) const { return symbols[static_cast<std::size_t>(pos - offset)]; }
};

// Leftmost position of the order-n column: the least integer > -sqrt(n).
int column_start(int n);

struct SqrtDistance {
  bool exact = false;
  int agreement = 0;  // N when exact, the certified lower bound on N otherwise
  double value = 0;   // 2^-N when exact, the upper end otherwise
  double lower = 0;
  double upper = 0;
};

SqrtDistance sqrt_metric_distance(const TwoSidedWindow& x, const TwoSidedWindow& y);
// Same but throws IndeterminateDistance when the windows cannot decide N.
double sqrt_metric_distance_exact(const TwoSidedWindow& x, const TwoSidedWindow& y);

class IndeterminateDistance : public CertificationError {
 public:
  IndeterminateDistance(double lo, double hi);
  double lower, upper;
};

}  // namespace entrodim
