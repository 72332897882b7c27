#include "entrodim/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "entrodim/error.hpp"

namespace entrodim::io {

void Node::fail(const std::string& msg) const {
  throw ValidationError(path_.empty() ? msg : path_ + ": " + msg);
}

bool Node::has(const char* key) const { return j_->is_object() && j_->contains(key); }

Node Node::operator[](const char* key) const {
  if (!j_->is_object()) fail("expected an object");
  auto it = j_->find(key);
  std::string p = path_.empty() ? key : path_ + "." + key;
  if (it == j_->end()) throw ValidationError(p + ": missing");
  return Node(*it, p);
}

Node Node::operator[](std::size_t i) const {
  if (!j_->is_array()) fail("expected an array");
  if (i >= j_->size()) fail("index " + std::to_string(i) + " out of range");
  return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]");
}

std::size_t Node::size() const {
  if (!j_->is_array()) fail("expected an array");
  return j_->size();
}

void Node::only(std::initializer_list<const char*> keys) const {
  if (!j_->is_object()) fail("expected an object");
  for (auto it = j_->begin(); it != j_->end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw ValidationError((path_.empty() ? "" : path_ + ".") + it.key() + ": unknown key");
  }
}

long long Node::integer(long long lo, long long hi) const {
  if (!j_->is_number_integer()) fail("expected an integer");
  long long v = j_->get<long long>();
  if (v < lo || v > hi) fail("must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double Node::number() const {
  if (!j_->is_number()) fail("expected a number");
  double v = j_->get<double>();
  if (!std::isfinite(v)) fail("must be finite");
  return v;
}

std::string Node::string() const {
  if (!j_->is_string()) fail("expected a string");
  return j_->get<std::string>();
}

bool Node::boolean() const {
  if (!j_->is_boolean()) fail("expected true or false");
  return j_->get<bool>();
}

std::vector<int> Node::ints(int lo, int hi) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].as_int(lo, hi));
  return out;
}

std::vector<double> Node::numbers() const {
  std::vector<double> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back((*this)[i].number());
  return out;
}

json read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError(file + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(file + ": " + e.what());
  }
}

SubshiftSystem system_from(const Node& n) {
  n.only({"alphabet", "transitions", "sided"});
  int M = n["alphabet"].as_int(1, 1 << 16);
  Node t = n["transitions"];
  std::vector<std::vector<int>> A;
  for (std::size_t i = 0; i < t.size(); ++i) A.push_back(t[i].ints(0, 1));
  Sidedness sided = Sidedness::one;
  if (n.has("sided")) {
    std::string s = n["sided"].string();
    if (s == "two") sided = Sidedness::two;
    else if (s != "one") n["sided"].fail("must be \"one\" or \"two\"");
  }
  return scoped(n, [&] { return SubshiftSystem(M, A, sided); });
}

json to_json(const SubshiftSystem& sys) {
  return {{"alphabet", sys.alphabet()},
          {"transitions", sys.transitions()},
          {"sided", sys.sided() == Sidedness::one ? "one" : "two"}};
}

CylinderSet cylinders_from(const Node& n, const SubshiftSystem& sys) {
  n.only({"cylinders"});
  Node cs = n["cylinders"];
  std::vector<Cylinder> out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Node c = cs[i];
    c.only({"word", "anchor"});
    Cylinder cyl;
    cyl.word = c["word"].ints(0, sys.alphabet() - 1);
    if (c.has("anchor")) cyl.anchor = c["anchor"].as_int(-(1 << 20), 1 << 20);
    scoped(c["word"], [&] { sys.require_admissible(cyl.word, "word"); });
    out.push_back(std::move(cyl));
  }
  CylinderSet z(std::move(out));
  scoped(n, [&] { z.validate(sys); });
  return z;
}

json to_json(const CylinderSet& z) {
  json cs = json::array();
  for (const auto& c : z.cylinders()) cs.push_back({{"word", c.word}, {"anchor", c.anchor}});
  return {{"cylinders", cs}};
}

Gauge gauge_from(const Node& n) {
  std::string type = n["type"].string();
  if (type == "exp") {
    n.only({"type", "s"});
    double s = n["s"].number();
    return scoped(n, [&] { return Gauge::exp(s); });
  }
  if (type == "table") {
    n.only({"type", "values", "tail_rate"});
    auto values = n["values"].numbers();
    double tail = n["tail_rate"].number();
    return scoped(n, [&] { return Gauge::table(values, tail); });
  }
  if (type == "piecewise") {
    n.only({"type", "segments"});
    Node segs = n["segments"];
    std::vector<int> starts;
    std::vector<Gauge> pieces;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      segs[i].only({"start", "gauge"});
      starts.push_back(segs[i]["start"].as_int(1, 1 << 30));
      pieces.push_back(gauge_from(segs[i]["gauge"]));
    }
    return scoped(n, [&] { return Gauge::piecewise(starts, pieces); });
  }
  n["type"].fail("must be \"exp\", \"table\" or \"piecewise\"");
}

json to_json(const Gauge& g) {
  const auto& r = g.repr();
  if (auto* e = std::get_if<Gauge::Exp>(&r)) return {{"type", "exp"}, {"s", e->rate}};
  if (auto* t = std::get_if<Gauge::Table>(&r)) return {{"type", "table"}, {"values", t->values}, {"tail_rate", t->tail_rate}};
  const auto& p = std::get<Gauge::Piecewise>(r);
  json segs = json::array();
  for (std::size_t i = 0; i < p.pieces.size(); ++i) segs.push_back({{"start", p.starts[i]}, {"gauge", to_json(p.pieces[i])}});
  return {{"type", "piecewise"}, {"segments", segs}};
}

BallFamily family_from(const Node& n, const SubshiftSystem& sys) {
  n.only({"epsilon", "balls"});
  BallFamily f;
  if (n.has("epsilon")) {
    f.epsilon = n["epsilon"].number();
    if (f.epsilon != 0.5) n["epsilon"].fail("only 0.5 is supported (balls are cylinders)");
  }
  Node bs = n["balls"];
  for (std::size_t i = 0; i < bs.size(); ++i) {
    Node b = bs[i];
    b.only({"center", "order"});
    Ball ball;
    ball.center = b["center"].ints(0, sys.alphabet() - 1);
    ball.order = b["order"].as_int(1, static_cast<int>(ball.center.size()));
    scoped(b["center"], [&] { sys.require_admissible(ball.center, "center"); });
    f.balls.push_back(std::move(ball));
  }
  return f;
}

json to_json(const BallFamily& f) {
  json bs = json::array();
  for (const auto& b : f.balls) bs.push_back({{"center", b.center}, {"order", b.order}});
  return {{"epsilon", f.epsilon}, {"balls", bs}};
}

TreeMeasure tree_measure_from(const Node& n) {
  n.only({"depth", "atoms"});
  TreeMeasure m;
  m.depth = n["depth"].as_int(0, 1 << 20);
  Node as = n["atoms"];
  for (std::size_t i = 0; i < as.size(); ++i) {
    as[i].only({"word", "weight"});
    Word w = as[i]["word"].ints(0, 1 << 16);
    if (static_cast<int>(w.size()) != m.depth) as[i]["word"].fail("length must equal depth");
    double x = as[i]["weight"].number();
    if (x < 0) as[i]["weight"].fail("must be >= 0");
    m.atoms.emplace_back(std::move(w), x);
  }
  return m;
}

json to_json(const TreeMeasure& m) {
  json as = json::array();
  for (const auto& [w, x] : m.atoms) as.push_back({{"word", w}, {"weight", x}});
  return {{"depth", m.depth}, {"atoms", as}};
}

json to_json(const WeightedCover& c) {
  json ps = json::array();
  for (const auto& p : c.pairs) ps.push_back({{"word", p.word}, {"c", p.coefficient}});
  return {{"pairs", ps}, {"value", c.value}, {"depth", c.depth}, {"N", c.N}};
}

PlateauSpec plateau_spec_from(const Node& n) {
  n.only({"lambda", "P", "u", "v", "e_gaps"});
  PlateauSpec s;
  if (n.has("lambda")) {
    if (n.has("u") || n.has("v")) n.fail("give either lambda or u/v, not both");
    double lambda = n["lambda"].number();
    int P = n["P"].as_int(2, 9);
    s = scoped(n, [&] { return geometric_plateau_spec(lambda, P); });
  } else {
    s.u = n["u"].numbers();
    s.v = n["v"].numbers();
    s.P = n.has("P") ? n["P"].as_int(2, 9) : static_cast<int>(s.u.size());
  }
  s.e_gaps = n.has("e_gaps") ? n["e_gaps"].numbers() : default_plateau_spec().e_gaps;
  scoped(n, [&] { s.validate(); });
  return s;
}

json to_json(const PlateauSpec& s) { return {{"u", s.u}, {"v", s.v}, {"P", s.P}, {"e_gaps", s.e_gaps}}; }

json profile_json(const SmoothProfile& p, int samples) {
  json pl = json::array();
  for (int i = 1; i <= p.plateaus(); ++i)
    pl.push_back({{"u", p.u(i)}, {"v", p.v(i)}, {"alpha", p.alpha(i)}, {"alpha_gap", p.alpha_gap(i)}});
  json sm = json::array();
  for (int k = 0; k <= samples; ++k) {
    double x = static_cast<double>(k) / samples;
    sm.push_back({{"x", x}, {"phi", p.value(x)}});
  }
  json rt = json::array();
  for (const auto& r : p.retargets()) rt.push_back({{"step", r.step}, {"index", r.index}, {"gap", r.gap}});
  return {{"plateaus", pl}, {"samples", sm}, {"retargets", rt}};
}

MarkovMeasure markov_from(const Node& n) {
  n.only({"P", "pi", "bernoulli", "parry"});
  if (n.has("bernoulli")) {
    auto p = n["bernoulli"].numbers();
    return scoped(n["bernoulli"], [&] { return MarkovMeasure::bernoulli(p); });
  }
  if (n.has("parry")) {
    SubshiftSystem sys = system_from(n["parry"]);
    return scoped(n["parry"], [&] { return MarkovMeasure::parry(sys); });
  }
  Node pm = n["P"];
  std::vector<std::vector<double>> P;
  for (std::size_t i = 0; i < pm.size(); ++i) P.push_back(pm[i].numbers());
  std::vector<double> pi;
  if (n.has("pi")) pi = n["pi"].numbers();
  return scoped(n, [&] { return MarkovMeasure::from_matrix(P, pi); });
}

json to_json(const MarkovMeasure& m) { return {{"P", m.P()}, {"pi", m.pi()}}; }

DyadicSet dyadic_from(const Node& n) {
  n.only({"allowed", "words", "points"});
  DyadicSet d;
  if (n.has("allowed")) {
    d.allowed.clear();
    for (std::size_t i = 0; i < n["allowed"].size(); ++i) d.allowed.push_back(n["allowed"][i].ints(0, 1));
  }
  if (n.has("words"))
    for (std::size_t i = 0; i < n["words"].size(); ++i) d.words.push_back(n["words"][i].ints(0, 1));
  if (n.has("points"))
    for (std::size_t i = 0; i < n["points"].size(); ++i) d.points.push_back(n["points"][i].ints(0, 1));
  scoped(n, [&] { d.validate(); });
  return d;
}

DyadicMeasure dyadic_measure_from(const Node& n) {
  n.only({"tree", "bernoulli", "nested_mixture", "phase", "mixture"});
  if (!n.raw().is_object() || n.raw().size() != 1) n.fail("expected exactly one measure kind");
  if (n.has("tree")) {
    TreeMeasure t = tree_measure_from(n["tree"]);
    return scoped(n["tree"], [&] { return DyadicMeasure::tree(t); });
  }
  if (n.has("bernoulli")) {
    double p = n["bernoulli"].number();
    return scoped(n["bernoulli"], [&] { return DyadicMeasure::bernoulli(p); });
  }
  if (n.has("nested_mixture")) {
    int terms = n["nested_mixture"].as_int(1, 12);
    return DyadicMeasure::nested_mixture(terms);
  }
  if (n.has("phase")) {
    Node f = n["phase"];
    std::vector<bool> free;
    for (std::size_t i = 0; i < f.size(); ++i) free.push_back(f[i].boolean());
    return scoped(f, [&] { return DyadicMeasure::phase_periodic(free); });
  }
  Node m = n["mixture"];
  std::vector<std::pair<double, DyadicMeasure>> parts;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i].only({"weight", "measure"});
    parts.emplace_back(m[i]["weight"].number(), dyadic_measure_from(m[i]["measure"]));
  }
  return scoped(m, [&] { return DyadicMeasure::mixture(std::move(parts)); });
}

json to_json(const DyadicSet& d) { return {{"allowed", d.allowed}, {"words", d.words}, {"points", d.points}}; }

json to_json(const CoverValue& v) {
  return {{"value", v.value}, {"depth", v.depth}, {"N", v.N}, {"epsilon", v.epsilon},
          {"witness", to_json(v.witness)}, {"witness_complete", v.witness_complete}};
}

json to_json(const PackValue& v) {
  return {{"value", v.value}, {"depth", v.depth}, {"N", v.N}, {"epsilon", v.epsilon},
          {"witness", to_json(v.witness)}, {"witness_complete", v.witness_complete}};
}

json to_json(const EntropyEstimate& e) {
  json t = json::array();
  for (const auto& r : e.table) t.push_back({{"N", r.N}, {"D", r.D}, {"s_star", r.s_star}, {"delta", r.delta}});
  return {{"s_star", e.estimate}, {"delta", e.delta}, {"table", t}};
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {}

Csv& Csv::row(const std::vector<json>& cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width");
  rows_.push_back(cells);
  return *this;
}

std::string Csv::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
  out << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << (r[i].is_string() ? r[i].get<std::string>() : r[i].dump());
    out << '\n';
  }
  return out.str();
}

}  // namespace entrodim::io
