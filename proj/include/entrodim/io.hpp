#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrodim/coverpack.hpp"
#include "entrodim/dimension.hpp"
#include "entrodim/frostman.hpp"
#include "entrodim/gauge.hpp"
#include "entrodim/localent.hpp"
#include "entrodim/skewprod.hpp"
#include "entrodim/symdyn.hpp"

namespace entrodim::io {

using nlohmann::json;

// Cursor into a JSON document that remembers where it is, so every schema
// error names the offending element ("cylinders[2].word[0]: ...").
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& msg) const;

  bool has(const char* key) const;
  Node operator[](const char* key) const;  // required member
  Node operator[](std::size_t i) const;
  std::size_t size() const;  // array length
  // Members outside `keys` are rejected.
  void only(std::initializer_list<const char*> keys) const;

  long long integer(long long lo, long long hi) const;
  int as_int(int lo, int hi) const { return static_cast<int>(integer(lo, hi)); }
  double number() const;
  std::string string() const;
  bool boolean() const;
  std::vector<int> ints(int lo, int hi) const;
  std::vector<double> numbers() const;

 private:
  const json* j_;
  std::string path_;
};

json read_file(const std::string& file);
// Runs f, prefixing any ValidationError from the library with the node path.
template <class F>
auto scoped(const Node& n, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    n.fail(e.what());
  }
}

SubshiftSystem system_from(const Node& n);
json to_json(const SubshiftSystem& sys);
CylinderSet cylinders_from(const Node& n, const SubshiftSystem& sys);
json to_json(const CylinderSet& z);
Gauge gauge_from(const Node& n);
json to_json(const Gauge& g);
BallFamily family_from(const Node& n, const SubshiftSystem& sys);
json to_json(const BallFamily& f);
TreeMeasure tree_measure_from(const Node& n);
json to_json(const TreeMeasure& m);
json to_json(const WeightedCover& c);
PlateauSpec plateau_spec_from(const Node& n);
json to_json(const PlateauSpec& s);
json profile_json(const SmoothProfile& p, int samples);
MarkovMeasure markov_from(const Node& n);
json to_json(const MarkovMeasure& m);
DyadicSet dyadic_from(const Node& n);
// {"tree": measure} | {"bernoulli": p} | {"nested_mixture": terms} |
// {"phase": [bool...]} | {"mixture": [{"weight": w, "measure": ...}]}
DyadicMeasure dyadic_measure_from(const Node& n);
json to_json(const DyadicSet& d);
json to_json(const CoverValue& v);
json to_json(const PackValue& v);
json to_json(const EntropyEstimate& e);

// Minimal CSV: numbers printed with round-trip precision.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<json>& cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<json>> rows_;
};

}  // namespace entrodim::io
