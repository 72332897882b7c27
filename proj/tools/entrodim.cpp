#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>

#include "entrodim/coverpack.hpp"
#include "entrodim/dimension.hpp"
#include "entrodim/error.hpp"
#include "entrodim/frostman.hpp"
#include "entrodim/gauge.hpp"
#include "entrodim/io.hpp"
#include "entrodim/localent.hpp"
#include "entrodim/quadratic.hpp"
#include "entrodim/skewprod.hpp"

using namespace entrodim;
using io::json;
using io::Node;

namespace {

// Options of one subcommand, kept in declaration order so the resolved
// config prints the same way every run.
class Params {
 public:
  explicit Params(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    auto* opt = app_->add_option("--" + name, var, help)->capture_default_str();
    if constexpr (requires { var.push_back(0); }) opt->delimiter(',');
    getters_.emplace_back(name, [&var] { return json(var); });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    auto* opt = app_->add_flag("--" + name, var, help);
    getters_.emplace_back(name, [&var] { return json(var); });
    return opt;
  }

  // Values from a JSON config fill options not given on the command line.
  void apply(const json& cfg, const std::string& file) {
    if (!cfg.is_object()) throw ValidationError(file + ": expected an object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string where = file + ":$." + it.key();
      bool known = false;
      for (const auto& g : getters_) known = known || g.first == it.key();
      if (!known) throw ValidationError(where + ": unknown key");
      CLI::Option* opt = app_->get_option("--" + it.key());
      if (opt->count() > 0) continue;
      std::vector<std::string> vals;
      auto text = [&](const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_array() || v.is_object() || v.is_null()) throw ValidationError(where + ": unexpected nesting");
        return v.dump();
      };
      if (it->is_array())
        for (const auto& v : *it) vals.push_back(text(v));
      else
        vals.push_back(text(*it));
      opt->clear();
      try {
        for (auto& v : vals) opt->add_result(v);
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw ValidationError(where + ": " + e.what());
      }
    }
  }

  json resolved() const {
    json out = json::object();
    for (const auto& [name, get] : getters_) out[name] = get();
    return out;
  }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<json()>>> getters_;
};

struct Artifact {
  json result;
  std::optional<io::Csv> csv;
};

struct Command {
  CLI::App* app = nullptr;
  std::unique_ptr<Params> params;
  std::function<Artifact()> run;
};

// Inputs may be earlier artifacts; their result is the payload.
json load(const std::string& file) {
  json j = io::read_file(file);
  if (j.is_object() && j.value("tool", "") == "entrodim" && j.contains("result")) return j["result"];
  return j;
}

struct Doc {
  json j;
  std::string file;
  explicit Doc(const std::string& f) : j(load(f)), file(f) {}
  Node node() const { return Node(j, file + ":$"); }
};

SubshiftSystem load_system(const std::string& f) {
  if (f.empty()) throw ValidationError("system: required");
  Doc d(f);
  return io::system_from(d.node());
}

CylinderSet load_set(const std::string& f, const SubshiftSystem& sys) {
  if (f.empty()) return CylinderSet::everything(sys);
  Doc d(f);
  return io::cylinders_from(d.node(), sys);
}

Gauge load_gauge(const std::string& f, double s) {
  if (!f.empty()) {
    Doc d(f);
    return io::gauge_from(d.node());
  }
  if (std::isnan(s)) throw ValidationError("gauge: give --gauge or --s");
  return Gauge::exp(s);
}

Schedule schedule_of(int N, int D, const std::vector<int>& depths) {
  if (!depths.empty()) {
    if (N != 0) throw ValidationError("N: not allowed together with depths");
    return half_schedule(depths);
  }
  return {{N > 0 ? N : (D + 1) / 2, D}};
}

io::Csv table_csv(const EntropyEstimate& e) {
  io::Csv c({"N", "D", "s_star", "delta"});
  for (const auto& r : e.table) c.row({r.N, r.D, r.s_star, r.delta});
  return c;
}

void check_depth(int D) {
  if (D < 1 || D > 4096) throw ValidationError("depth: must lie in [1, 4096]");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale entropy and dimension computations on symbolic and interval systems", "entrodim"};
  app.set_version_flag("--version", std::string(ENTRODIM_VERSION));
  app.require_subcommand(1);

  std::string config_file, out_file = "-", format = "json";
  std::uint64_t seed = 1;
  int jobs = 1;
  std::map<std::string, Command> commands;

  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    Command& c = commands[name];
    c.app = app.add_subcommand(name, help);
    c.params = std::make_unique<Params>(c.app);
    c.app->add_option("--config", config_file, "JSON file of option values");
    c.app->add_option("--out", out_file, "output path, - for stdout")->capture_default_str();
    c.app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    return c;
  };

  // entropy
  std::string system_file, set_file, gauge_file, kind = "bowen";
  int depth = 20, N = 0;
  std::vector<int> depths;
  double s = kNaN;
  {
    Command& c = make("entropy", "Bowen entropy (or spanning exponent) of a cylinder set");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("set", set_file, "cylinder set JSON (default: everything)");
    p.add("depth", depth, "depth D");
    p.add("N", N, "least ball order (0: ceil(D/2))");
    p.add("depths", depths, "schedule of depths, N = ceil(D/2) each");
    p.add("kind", kind, "bowen or spanning")->check(CLI::IsMember({"bowen", "spanning"}));
    c.run = [&] {
      check_depth(depth);
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      auto sched = schedule_of(N, depth, depths);
      auto e = kind == "bowen" ? bowen_entropy(sys, z, sched) : spanning_exponent(sys, z, sched);
      return Artifact{io::to_json(e), table_csv(e)};
    };
  }
  {
    Command& c = make("pack", "Packing value or packing entropy");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("set", set_file, "cylinder set JSON (default: everything)");
    p.add("depth", depth, "depth D");
    p.add("N", N, "least ball order (0: ceil(D/2))");
    p.add("depths", depths, "schedule of depths");
    p.add("s", s, "exponent; when given, report the packing value at s");
    c.run = [&] {
      check_depth(depth);
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      if (!std::isnan(s)) {
        auto v = pack_value(sys, z, s, N > 0 ? N : (depth + 1) / 2, depth);
        return Artifact{io::to_json(v), std::nullopt};
      }
      auto e = packing_entropy(sys, z, schedule_of(N, depth, depths));
      return Artifact{io::to_json(e), table_csv(e)};
    };
  }
  bool tripled = false, weighted = false;
  {
    Command& c = make("cover", "Cheapest Bowen-ball cover under a gauge");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("set", set_file, "cylinder set JSON (default: everything)");
    p.add("gauge", gauge_file, "gauge JSON");
    p.add("s", s, "exponential gauge rate when no gauge file is given");
    p.add("depth", depth, "depth D");
    p.add("N", N, "least ball order (0: ceil(D/2))");
    p.flag("tripled", tripled, "use tripled balls");
    p.flag("weighted", weighted, "solve the fractional cover LP instead");
    c.run = [&] {
      check_depth(depth);
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      auto b = load_gauge(gauge_file, s);
      int n0 = N > 0 ? N : (depth + 1) / 2;
      if (weighted && tripled) throw ValidationError("weighted: not available with tripled");
      if (weighted) return Artifact{io::to_json(weighted_cover_value(sys, z, b, n0, depth)), std::nullopt};
      auto v = tripled ? tripled_cover_value(sys, z, b, n0, depth) : min_cover_value(sys, z, b, n0, depth);
      return Artifact{io::to_json(v), std::nullopt};
    };
  }
  std::string family_file;
  {
    Command& c = make("vitali", "Greedy disjoint subfamily whose tripled balls cover the family");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("family", family_file, "ball family JSON");
    c.run = [&] {
      auto sys = load_system(system_file);
      if (family_file.empty()) throw ValidationError("family: required");
      Doc d(family_file);
      auto f = io::family_from(d.node(), sys);
      return Artifact{io::to_json(vitali_select(f)), std::nullopt};
    };
  }
  std::string method = "flow";
  {
    Command& c = make("frostman", "Frostman measure dual to the weighted cover");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("set", set_file, "cylinder set JSON (default: everything)");
    p.add("gauge", gauge_file, "gauge JSON");
    p.add("s", s, "exponential gauge rate when no gauge file is given");
    p.add("depth", depth, "depth D");
    p.add("N", N, "least ball order (0: ceil(D/2))");
    p.add("method", method, "flow or lp")->check(CLI::IsMember({"flow", "lp"}));
    c.run = [&] {
      check_depth(depth);
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      auto b = load_gauge(gauge_file, s);
      int n0 = N > 0 ? N : (depth + 1) / 2;
      auto r = method == "flow" ? frostman_measure(sys, z, b, n0, depth) : frostman_measure_lp(sys, z, b, n0, depth);
      io::Csv csv({"word", "weight"});
      for (const auto& [w, m] : r.measure.atoms) {
        std::string word;
        for (int a : w) word += std::to_string(a) + (sys.alphabet() > 10 ? " " : "");
        csv.row({word, m});
      }
      return Artifact{{{"c", r.c}, {"measure", io::to_json(r.measure)}}, csv};
    };
  }
  std::string chain_file;
  double threshold = 0.01;
  int horizon = 0;
  {
    Command& c = make("gauge", "Search a gauge chain for one with a non-null cover value");
    Params& p = *c.params;
    p.add("system", system_file, "system JSON");
    p.add("set", set_file, "cylinder set JSON (default: everything)");
    p.add("chain", chain_file, "JSON array of gauges, each dominating the next");
    p.add("depth", depth, "depth D");
    p.add("N", N, "least ball order (0: ceil(D/2))");
    p.add("threshold", threshold, "least accepted cover value");
    p.add("horizon", horizon, "horizon for dominance checks (0: max(4D, 64))");
    c.run = [&] {
      check_depth(depth);
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      if (chain_file.empty()) throw ValidationError("chain: required");
      Doc d(chain_file);
      Node n = d.node();
      std::vector<Gauge> chain;
      for (std::size_t i = 0; i < n.size(); ++i) chain.push_back(io::gauge_from(n[i]));
      auto r = nonnull_gauge_search(sys, z, chain, N > 0 ? N : (depth + 1) / 2, depth, threshold, horizon);
      json refusal = json::array();
      for (const auto& e : r.refusal)
        refusal.push_back({{"gauge", e.gauge}, {"cover_cost", e.cover_cost}, {"witness", io::to_json(e.witness)}});
      json res = {{"accepted", r.accepted}, {"value", r.value}, {"threshold", r.threshold}, {"cuts", r.cuts},
                  {"refusal", refusal}, {"certificate", r.certificate}};
      res["gauge"] = r.gauge ? io::to_json(*r.gauge) : json(nullptr);
      return Artifact{res, std::nullopt};
    };
  }
  std::vector<double> a_values;
  int n_max = 14, points = 0;
  double a_min = 2.8, a_max = 4.0, slack = 0.02;
  {
    Command& c = make("logistic", "Lap counts and entropy of logistic maps");
    Params& p = *c.params;
    p.add("a", a_values, "parameters, comma separated");
    p.add("n-max", n_max, "largest iterate");
    p.add("points", points, "scan this many grid points over [a-min, a-max] instead");
    p.add("a-min", a_min, "scan start");
    p.add("a-max", a_max, "scan end");
    p.add("slack", slack, "monotonicity slack for scans");
    c.run = [&]() -> Artifact {
      if (points > 0) {
        if (points < 2) throw ValidationError("points: must be >= 2");
        std::vector<double> grid;
        for (int i = 0; i < points; ++i) grid.push_back(a_min + (a_max - a_min) * i / (points - 1));
        auto r = entropy_monotonicity_scan(grid, n_max, slack);
        io::Csv csv({"a", "h_estimate", "err"});
        json pts = json::array();
        for (const auto& q : r.points) {
          csv.row({q.a, q.h, q.err});
          pts.push_back({{"a", q.a}, {"h", q.h}, {"err", q.err}});
        }
        return {{{"points", pts}, {"flagged", r.flagged}, {"slack", r.slack}, {"clean", r.clean()}}, csv};
      }
      if (a_values.empty()) throw ValidationError("a: give parameters or --points");
      io::Csv csv({"a", "n", "laps"});
      json rows = json::array();
      for (double a : a_values) {
        auto e = logistic_entropy(LogisticMap(a), n_max);
        for (int n = 1; n <= e.table.n_max(); ++n) csv.row({a, n, e.table.at(n)});
        rows.push_back({{"a", a}, {"h", e.estimate}, {"err", e.error}, {"laps", e.table.laps}});
      }
      return {rows, csv};
    };
  }
  std::string spec_file;
  std::vector<int> slices, lowers;
  int samples = 200;
  {
    Command& c = make("skew", "Plateau profile of the skew product and slice entropies");
    Params& p = *c.params;
    p.add("spec", spec_file, "plateau spec JSON (default: built-in)");
    p.add("slices", slices, "j values for fibre entropy upper bounds at x = 1 - 1/j");
    p.add("lower", lowers, "plateau indices for full-entropy lower estimates");
    p.add("n-max", n_max, "lap depth");
    p.add("samples", samples, "profile samples in the JSON output");
    c.run = [&]() -> Artifact {
      SmoothProfile prof = default_profile();
      json spec_json = io::to_json(default_plateau_spec());
      if (!spec_file.empty()) {
        Doc d(spec_file);
        auto spec = io::plateau_spec_from(d.node());
        spec_json = io::to_json(spec);
        prof = retarget_plateaus(build_psi(spec), spec.e_gaps, entropy_proxy_passes);
      }
      if (samples < 1 || samples > 100000) throw ValidationError("samples: must lie in [1, 100000]");
      io::Csv csv({"j", "upper", "margin"});
      json up = json::array(), lo = json::array();
      for (int j : slices) {
        auto u = diagonal_slice_entropy_upper(prof, j, n_max);
        csv.row({u.j, u.upper, u.margin});
        up.push_back({{"j", u.j}, {"x", u.x}, {"a", u.a}, {"upper", u.upper}, {"error", u.error}, {"margin", u.margin}});
      }
      for (int i : lowers) {
        auto l = diagonal_full_entropy_lower(prof, i);
        lo.push_back({{"i", l.i}, {"a", l.a}, {"lower", l.lower}, {"error", l.error}, {"proxy_only", l.proxy_only}});
      }
      json res = {{"spec", spec_json}, {"profile", io::profile_json(prof, samples)}, {"slices", up}, {"lower", lo}};
      return {res, csv};
    };
  }
  std::string mode = "hausdorff";
  double delta = 0;
  {
    Command& c = make("dim", "Hausdorff dimension and the entropy correspondences");
    Params& p = *c.params;
    p.add("mode", mode, "hausdorff, value, doubling or sqrt")
        ->check(CLI::IsMember({"hausdorff", "value", "doubling", "sqrt"}));
    p.add("set", set_file, "dyadic set JSON (hausdorff, value) or cylinder set JSON (doubling, sqrt)");
    p.add("system", system_file, "system JSON (doubling, sqrt)");
    p.add("depth", depth, "depth D");
    p.add("depths", depths, "depth schedule (hausdorff)");
    p.add("s", s, "exponent of h(t) = t^s (value)");
    p.add("delta", delta, "mesh (value; 0: 2^-ceil(D/2))");
    c.run = [&]() -> Artifact {
      check_depth(depth);
      if (mode == "hausdorff" || mode == "value") {
        DyadicSet set = DyadicSet::unit_interval();
        if (!set_file.empty()) {
          Doc d(set_file);
          set = io::dyadic_from(d.node());
        }
        if (mode == "value") {
          if (std::isnan(s)) throw ValidationError("s: required for mode value");
          double dl = delta > 0 ? delta : std::ldexp(1.0, -(depth + 1) / 2);
          auto v = hausdorff_value(set, ContinuousGauge::power(s), dl, depth);
          return {{{"value", v.value}, {"delta", v.delta}, {"depth", v.depth}, {"gauge", v.gauge}, {"witness", v.witness}, {"witness_complete", v.witness_complete}},
                  std::nullopt};
        }
        auto e = hausdorff_dimension(set, depths.empty() ? std::vector<int>{depth} : depths);
        io::Csv csv({"depth", "s_star"});
        json t = json::array();
        for (const auto& r : e.table) {
          csv.row({r.depth, r.s_star});
          t.push_back({{"depth", r.depth}, {"s_star", r.s_star}, {"delta", r.delta}});
        }
        return {{{"dim", e.estimate}, {"delta", e.delta}, {"table", t}}, csv};
      }
      auto sys = load_system(system_file);
      auto z = load_set(set_file, sys);
      if (mode == "doubling") {
        auto r = doubling_correspondence(sys, z, depth);
        return {{{"h_B", r.h_B}, {"log2_dim", r.log2_dim}, {"gap", r.gap}}, std::nullopt};
      }
      auto r = sqrt_metric_dimension(sys, z, depth);
      io::Csv csv({"depth", "s_star"});
      json t = json::array();
      for (const auto& row : r.table) {
        csv.row({row.depth, row.s_star});
        t.push_back({{"depth", row.depth}, {"s_star", row.s_star}});
      }
      return {{{"dim", r.dim}, {"h_B_over_log2", r.h_B_over_log2}, {"gap", r.gap}, {"raw_s_star", r.raw_s_star},
               {"multiplicity_log2", r.multiplicity_log2}, {"table", t}},
              csv};
    };
  }
  std::string measure_file, subset_file, candidates_file, le_mode = "entropy";
  int le_samples = 500;
  int window_lo = 1000, window_hi = 2000;
  double tol = 0.03, alpha = 0.05;
  {
    Command& c = make("localent", "Local and measure entropies, restriction and measure dimension");
    Params& p = *c.params;
    p.add("mode", le_mode, "entropy, local, variational, restrict or dimension")
        ->check(CLI::IsMember({"entropy", "local", "variational", "restrict", "dimension"}));
    p.add("measure", measure_file, "Markov measure JSON, or dyadic measure JSON for mode dimension");
    p.add("system", system_file, "system JSON (variational)");
    p.add("set", set_file, "cylinder set Z (variational, restrict)");
    p.add("subset", subset_file, "cylinder set Y inside Z (restrict)");
    p.add("candidates", candidates_file, "JSON array of Markov measures (variational)");
    p.add("samples", le_samples, "Monte Carlo samples");
    p.add("window-lo", window_lo, "first n of the tail window");
    p.add("window-hi", window_hi, "last n of the tail window");
    p.add("depth", depth, "depth (variational, dimension)");
    p.add("tol", tol, "tolerance (variational, restrict)");
    p.add("alpha", alpha, "quantile trim (dimension)");
    p.add("seed", seed, "random seed (ENTRODIM_SEED overrides)");
    p.add("jobs", jobs, "worker threads");
    c.run = [&]() -> Artifact {
      if (jobs < 1 || jobs > 256) throw ValidationError("jobs: must lie in [1, 256]");
      Window w{window_lo, window_hi};
      w.validate();
      if (measure_file.empty() && le_mode != "variational") throw ValidationError("measure: required");
      if (le_mode == "dimension") {
        Doc d(measure_file);
        auto mu = io::dyadic_measure_from(d.node());
        auto r = measure_dimension(mu, depth, alpha, le_samples, seed);
        return {{{"upper_dim", r.upper}, {"lower_dim", r.lower}, {"window", {r.window.lo, r.window.hi}},
                 {"alpha", r.alpha}, {"points", r.points}, {"sampled", r.sampled}, {"seed", seed}},
                std::nullopt};
      }
      if (le_mode == "variational") {
        auto sys = load_system(system_file);
        auto z = load_set(set_file, sys);
        if (candidates_file.empty()) throw ValidationError("candidates: required");
        Doc d(candidates_file);
        Node n = d.node();
        std::vector<MarkovMeasure> cands;
        for (std::size_t i = 0; i < n.size(); ++i) cands.push_back(io::markov_from(n[i]));
        auto r = variational_gap(sys, z, cands, depth, tol, {le_samples, w, seed, jobs});
        json rows = json::array();
        for (const auto& row : r.rows)
          rows.push_back({{"index", row.index}, {"skipped", row.skipped}, {"notice", row.notice}, {"mass", row.mass},
                          {"lower", row.lower}, {"upper", row.upper}, {"half_width", row.half_width}, {"holds", row.holds}});
        return {{{"h_B", r.h_B}, {"tol", r.tol}, {"rows", rows}, {"achiever", r.achiever}, {"gap", r.gap},
                 {"holds", r.holds}},
                std::nullopt};
      }
      Doc d(measure_file);
      auto mu = io::markov_from(d.node());
      if (le_mode == "entropy") {
        auto r = measure_entropy(mu, le_samples, w, seed, jobs);
        return {{{"upper", r.upper}, {"lower", r.lower}, {"half_width_upper", r.half_width_upper},
                 {"half_width_lower", r.half_width_lower}, {"seed", r.seed}, {"samples", r.samples},
                 {"window", {w.lo, w.hi}}, {"rate", entropy_rate(mu)}},
                std::nullopt};
      }
      if (le_mode == "local") {
        std::mt19937_64 rng(seed);
        Word x = mu.sample(w.hi, rng);
        auto r = local_entropy(mu, x, w);
        io::Csv csv({"n", "value"});
        for (std::size_t i = 0; i < r.values.size(); ++i) csv.row({w.lo + static_cast<int>(i), r.values[i]});
        return {{{"lower", r.lower}, {"upper", r.upper}, {"values", r.values}, {"seed", seed}}, csv};
      }
      SubshiftSystem sys = SubshiftSystem::full_shift(mu.alphabet());
      auto z = load_set(set_file, sys);
      if (subset_file.empty()) throw ValidationError("subset: required");
      auto y = load_set(subset_file, sys);
      auto r = restrict_and_recheck(mu, z, y, tol, {le_samples, w, seed, jobs});
      return {{{"mass_y", r.mass_y}, {"mu_lower", r.mu_lower}, {"nu_lower", r.nu_lower},
               {"max_deficit", r.max_deficit}, {"holds", r.holds}},
              std::nullopt};
    };
  }
  std::vector<std::string> system_files;
  double audit_tol = 1e-6;
  {
    Command& c = make("audit", "Per-part Bowen entropies of a finite disjoint union of systems");
    Params& p = *c.params;
    p.add("systems", system_files, "system JSON files, one per part");
    p.add("depth", depth, "depth D");
    p.add("tol", audit_tol, "attainment tolerance");
    c.run = [&]() -> Artifact {
      check_depth(depth);
      if (system_files.empty()) throw ValidationError("systems: required");
      std::vector<SubshiftSystem> parts;
      for (const auto& f : system_files) parts.push_back(load_system(f));
      auto u = block_union(parts);
      auto a = finite_slice_audit(u.sys, u.parts, depth, audit_tol);
      io::Csv csv({"part", "h_B", "attains"});
      json rows = json::array();
      for (const auto& pt : a.parts) {
        csv.row({pt.index, pt.h_B, pt.attains});
        rows.push_back({{"part", pt.index}, {"h_B", pt.h_B}, {"attains", pt.attains}});
      }
      return {{{"union_h_B", a.union_h_B}, {"slack", a.slack}, {"parts", rows}, {"attained", a.attained}, {"ties", a.ties}, {"note", a.note}},
              csv};
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [name, cmd] : commands) {
      if (!cmd.app->parsed()) continue;
      if (!config_file.empty()) cmd.params->apply(io::read_file(config_file), config_file);
      if (const char* env = std::getenv("ENTRODIM_SEED")) {
        try {
          std::size_t used = 0;
          seed = std::stoull(env, &used);
          if (env[used] != '\0') throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ValidationError("ENTRODIM_SEED: expected an unsigned integer");
        }
      }
      Artifact art = cmd.run();
      json cfg = cmd.params->resolved();
      std::string text;
      if (format == "csv") {
        if (!art.csv) throw ValidationError("format: " + name + " has no CSV output here");
        text = "# entrodim " + std::string(ENTRODIM_VERSION) + "\n# config " + cfg.dump() + "\n" + art.csv->str();
      } else {
        json doc = {{"tool", "entrodim"}, {"version", ENTRODIM_VERSION}, {"command", name}, {"config", cfg},
                    {"result", art.result}};
        text = doc.dump(2) + "\n";
      }
      if (out_file == "-") {
        std::cout << text;
      } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw ValidationError("out: cannot write " + out_file);
        out << text;
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "entrodim: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    std::cerr << "entrodim: certification failed: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
