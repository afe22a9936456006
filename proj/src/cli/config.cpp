#include "hslab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "hslab/errors.hpp"

namespace hslab::cli {

namespace {
constexpr const char* kModule = "cli";

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw SchemaError(kModule, path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : j.items())
    if (!ok.count(k)) schema(join(path, k), "unknown field");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) schema(path, "expected a positive number");
  return v;
}

int count(const json& j, const std::string& path, int min_value) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min_value || v > 1000000000LL) schema(path, "expected an integer >= " + std::to_string(min_value));
  return static_cast<int>(v);
}

std::vector<double> numbers(const json& j, const std::string& path, bool require_positive) {
  if (j.is_number()) return {require_positive ? positive(j, path) : number(j, path)};
  if (!j.is_array() || j.empty()) schema(path, "expected a number or a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    out.push_back(require_positive ? positive(j[i], p) : number(j[i], p));
  }
  return out;
}

WeightSpec parse_weight(const json& j, const std::string& path) {
  WeightSpec w;
  if (j.is_number()) {
    w.coef = number(j, path);
    if (w.coef < 0.0) schema(path, "weights are nonnegative");
    return w;
  }
  if (j.is_string()) {
    if (j.get<std::string>() == "zero") {
      w.coef = 0.0;
      return w;
    }
    schema(path, "the only string weight is \"zero\"");
  }
  only_keys(j, path, {"const", "power", "coef", "exponent", "decay", "support"});
  if (j.contains("const")) {
    if (j.size() != 1) schema(path, "\"const\" takes no other fields");
    w.coef = number(j["const"], join(path, "const"));
  } else if (j.contains("power")) {
    w.exponent = number(j["power"], join(path, "power"));
    if (j.contains("coef")) w.coef = number(j["coef"], join(path, "coef"));
    if (j.size() > (j.contains("coef") ? 2u : 1u)) schema(path, "\"power\" takes only \"coef\" besides");
  } else {
    if (j.contains("coef")) w.coef = number(j["coef"], join(path, "coef"));
    if (j.contains("exponent")) w.exponent = number(j["exponent"], join(path, "exponent"));
    if (j.contains("decay")) w.decay = number(j["decay"], join(path, "decay"));
    if (j.contains("support")) {
      const auto& s = j["support"];
      const auto sp = join(path, "support");
      if (!s.is_array() || s.size() != 2) schema(sp, "expected [lo, hi]");
      w.lo = number(s[0], sp + "[0]");
      w.hi = s[1].is_null() ? core::Weight::kInf : number(s[1], sp + "[1]");
      if (!(w.lo >= 0.0 && w.hi > w.lo)) schema(sp, "expected 0 <= lo < hi");
    }
  }
  if (w.coef < 0.0) schema(join(path, "coef"), "weights are nonnegative");
  if (w.decay < 0.0) schema(join(path, "decay"), "decay must be nonnegative");
  return w;
}

BoundarySpec parse_boundaries(const json& j, const std::string& path) {
  only_keys(j, path, {"family", "A", "B", "gamma", "x", "a", "b"});
  BoundarySpec b;
  if (j.contains("family")) {
    if (!j["family"].is_string()) schema(join(path, "family"), "expected a string");
    b.family = j["family"].get<std::string>();
  }
  if (b.family == "linear" || b.family == "power") {
    if (!j.contains("A") || !j.contains("B")) schema(path, "A and B are required");
    b.A = positive(j["A"], join(path, "A"));
    b.B = positive(j["B"], join(path, "B"));
    if (b.family == "power") {
      if (!j.contains("gamma")) schema(path, "gamma is required for the power family");
      b.gamma = positive(j["gamma"], join(path, "gamma"));
    } else if (j.contains("gamma")) {
      schema(join(path, "gamma"), "only the power family takes gamma");
    }
    if (j.contains("x") || j.contains("a") || j.contains("b")) schema(path, "tables belong to the tabulated family");
  } else if (b.family == "tabulated") {
    for (const char* k : {"x", "a", "b"})
      if (!j.contains(k)) schema(path, std::string(k) + " is required for the tabulated family");
    b.x = numbers(j["x"], join(path, "x"), true);
    b.a = numbers(j["a"], join(path, "a"), true);
    b.b = numbers(j["b"], join(path, "b"), true);
    if (b.x.size() != b.a.size() || b.x.size() != b.b.size() || b.x.size() < 2)
      schema(path, "x, a and b must have equal lengths >= 2");
    if (j.contains("A") || j.contains("B") || j.contains("gamma")) schema(path, "A, B, gamma belong to parametric families");
  } else {
    schema(join(path, "family"), "expected linear, power or tabulated");
  }
  return b;
}

lab::Resolution parse_resolution(const json& j, const std::string& path, lab::Resolution r) {
  only_keys(j, path, {"nx", "ny", "order"});
  if (j.contains("nx")) {
    r.nx = count(j["nx"], join(path, "nx"), 1);
    r.ny = 2 * r.nx;
  }
  if (j.contains("ny")) r.ny = count(j["ny"], join(path, "ny"), 1);
  if (j.contains("order")) r.x_order = count(j["order"], join(path, "order"), 1);
  if (r.nx > lab::kMaxNx || r.ny > lab::kMaxNy) schema(path, "resolution caps are 4000 x 8000");
  if (r.x_order > 64) schema(join(path, "order"), "at most 64");
  return r;
}

json weight_json(const WeightSpec& w) {
  json o;
  o["coef"] = w.coef;
  o["exponent"] = w.exponent;
  o["decay"] = w.decay;
  o["support"] = json::array({w.lo, std::isinf(w.hi) ? json(nullptr) : json(w.hi)});
  return o;
}

json resolution_json(const lab::Resolution& r) {
  return json{{"nx", r.nx}, {"ny", r.ny}, {"order", r.x_order}};
}

}  // namespace

ProblemConfig parse_config(const json& j) {
  only_keys(j, "", {"boundaries", "A", "B", "v", "w", "p", "alpha", "window", "anchor", "resolution",
                    "tolerances", "constants", "seed", "nu", "fairway", "spectrum", "kappa", "partition",
                    "sweep", "holder"});
  ProblemConfig c;
  if (j.contains("boundaries")) {
    if (j.contains("A") || j.contains("B")) schema("A", "use either boundaries or the A/B shorthand");
    c.boundaries = parse_boundaries(j["boundaries"], "boundaries");
  } else {
    if (!j.contains("A") || !j.contains("B")) schema("boundaries", "required (or A and B)");
    c.boundaries.A = positive(j["A"], "A");
    c.boundaries.B = positive(j["B"], "B");
  }
  if (!j.contains("v")) schema("v", "required");
  if (!j.contains("w")) schema("w", "required");
  c.v = parse_weight(j["v"], "v");
  c.w = parse_weight(j["w"], "w");
  if (!j.contains("p")) schema("p", "required");
  c.p = number(j["p"], "p");
  if (!(c.p > 1.0)) schema("p", "expected 1 < p < inf");
  if (j.contains("alpha")) c.alpha = numbers(j["alpha"], "alpha", true);
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (!w.is_array() || w.size() != 2) schema("window", "expected [t_lo, t_hi]");
    c.t_lo = number(w[0], "window[0]");
    c.t_hi = number(w[1], "window[1]");
    if (!(c.t_lo > 0.0 && c.t_hi > c.t_lo)) throw DomainError(kModule, "window: expected 0 < t_lo < t_hi < inf");
  }
  if (j.contains("anchor")) c.anchor = positive(j["anchor"], "anchor");
  if (j.contains("resolution")) c.resolution = parse_resolution(j["resolution"], "resolution", c.resolution);
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    only_keys(t, "tolerances", {"inv", "quad", "fair", "depth_cap"});
    if (t.contains("inv")) c.tolerances.inv = positive(t["inv"], "tolerances.inv");
    if (t.contains("quad")) c.tolerances.quad = positive(t["quad"], "tolerances.quad");
    if (t.contains("fair")) c.tolerances.fair = positive(t["fair"], "tolerances.fair");
    if (t.contains("depth_cap")) c.tolerances.depth_cap = count(t["depth_cap"], "tolerances.depth_cap", 1);
  }
  if (j.contains("constants")) {
    const auto& t = j["constants"];
    only_keys(t, "constants", {"beta_p", "gamma_p"});
    if (t.contains("beta_p")) c.beta_p = positive(t["beta_p"], "constants.beta_p");
    if (t.contains("gamma_p")) c.gamma_p = positive(t["gamma_p"], "constants.gamma_p");
  }
  if (j.contains("seed")) {
    const auto& sd = j["seed"];
    if (!sd.is_number_integer() || (!sd.is_number_unsigned() && sd.get<long long>() < 0))
      schema("seed", "expected a nonnegative integer");
    c.seed = sd.get<std::uint64_t>();
  }
  if (j.contains("nu")) {
    const auto& t = j["nu"];
    only_keys(t, "nu", {"samples", "golden_iters"});
    if (t.contains("samples")) c.nu.samples = count(t["samples"], "nu.samples", 2);
    if (t.contains("golden_iters")) c.nu.golden_iters = count(t["golden_iters"], "nu.golden_iters", 0);
  }
  if (j.contains("fairway")) {
    only_keys(j["fairway"], "fairway", {"samples"});
    if (j["fairway"].contains("samples")) c.fairway_samples = count(j["fairway"]["samples"], "fairway.samples", 2);
  }
  if (j.contains("spectrum")) {
    only_keys(j["spectrum"], "spectrum", {"refine"});
    if (j["spectrum"].contains("refine")) {
      if (!j["spectrum"]["refine"].is_boolean()) schema("spectrum.refine", "expected a boolean");
      c.refine_spectrum = j["spectrum"]["refine"].get<bool>();
    }
  }
  if (j.contains("kappa")) {
    const auto& t = j["kappa"];
    only_keys(t, "kappa", {"intervals", "random", "resolution"});
    if (t.contains("intervals")) {
      const auto& iv = t["intervals"];
      if (!iv.is_array()) schema("kappa.intervals", "expected an array of [d, e] pairs");
      for (std::size_t i = 0; i < iv.size(); ++i) {
        const auto p = "kappa.intervals[" + std::to_string(i) + "]";
        if (!iv[i].is_array() || iv[i].size() != 2) schema(p, "expected [d, e]");
        const double d = positive(iv[i][0], p + "[0]"), e = positive(iv[i][1], p + "[1]");
        if (!(e > d)) throw DomainError(kModule, p + ": expected d < e");
        c.kappa_intervals.emplace_back(d, e);
      }
    }
    if (t.contains("random")) c.kappa_random = count(t["random"], "kappa.random", 0);
    if (t.contains("resolution"))
      c.kappa_resolution = parse_resolution(t["resolution"], "kappa.resolution", c.kappa_resolution);
  }
  if (j.contains("partition")) {
    only_keys(j["partition"], "partition", {"eps_fractions"});
    if (j["partition"].contains("eps_fractions")) {
      c.eps_fractions = numbers(j["partition"]["eps_fractions"], "partition.eps_fractions", true);
      for (double f : c.eps_fractions)
        if (f >= 1.0) schema("partition.eps_fractions", "fractions of ||H|| must be below 1");
    }
  }
  if (j.contains("sweep")) {
    only_keys(j["sweep"], "sweep", {"ratios"});
    if (j["sweep"].contains("ratios")) {
      c.sweep_ratios = numbers(j["sweep"]["ratios"], "sweep.ratios", true);
      for (double r : c.sweep_ratios)
        if (!(r > 1.0)) schema("sweep.ratios", "B/A ratios must exceed 1");
    }
  }
  if (j.contains("holder")) {
    only_keys(j["holder"], "holder", {"cut_sets", "tol"});
    if (j["holder"].contains("cut_sets")) c.holder_cut_sets = count(j["holder"]["cut_sets"], "holder.cut_sets", 0);
    if (j["holder"].contains("tol")) c.holder_tol = positive(j["holder"]["tol"], "holder.tol");
  }
  // the operator's standing assumptions, checked once up front
  make_problem(c);
  return c;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(kModule, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(kModule, path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ProblemConfig& c) {
  json j;
  json b;
  b["family"] = c.boundaries.family;
  if (c.boundaries.family == "tabulated") {
    b["x"] = c.boundaries.x;
    b["a"] = c.boundaries.a;
    b["b"] = c.boundaries.b;
  } else {
    b["A"] = c.boundaries.A;
    b["B"] = c.boundaries.B;
    if (c.boundaries.family == "power") b["gamma"] = c.boundaries.gamma;
  }
  j["boundaries"] = b;
  j["v"] = weight_json(c.v);
  j["w"] = weight_json(c.w);
  j["p"] = c.p;
  j["alpha"] = c.alpha;
  j["window"] = {c.t_lo, c.t_hi};
  j["anchor"] = c.anchor;
  j["resolution"] = resolution_json(c.resolution);
  j["tolerances"] = {{"inv", c.tolerances.inv}, {"quad", c.tolerances.quad}, {"fair", c.tolerances.fair},
                     {"depth_cap", c.tolerances.depth_cap}};
  j["constants"] = {{"beta_p", c.beta_p}, {"gamma_p", c.gamma_p}};
  j["seed"] = c.seed;
  j["nu"] = {{"samples", c.nu.samples}, {"golden_iters", c.nu.golden_iters}};
  j["fairway"] = {{"samples", c.fairway_samples}};
  j["spectrum"] = {{"refine", c.refine_spectrum}};
  json iv = json::array();
  for (const auto& [d, e] : c.kappa_intervals) iv.push_back({d, e});
  j["kappa"] = {{"intervals", iv}, {"random", c.kappa_random}, {"resolution", resolution_json(c.kappa_resolution)}};
  j["partition"] = {{"eps_fractions", c.eps_fractions}};
  j["sweep"] = {{"ratios", c.sweep_ratios}};
  j["holder"] = {{"cut_sets", c.holder_cut_sets}, {"tol", c.holder_tol}};
  return j;
}

core::BoundaryPair make_boundaries(const BoundarySpec& b) {
  if (b.family == "linear") return core::BoundaryPair::linear(b.A, b.B);
  if (b.family == "power") return core::BoundaryPair::power(b.A, b.B, b.gamma);
  auto pair = core::BoundaryPair::tabulated(b.x, b.a, b.b);
  pair.validate(b.x.front(), b.x.back());
  return pair;
}

core::Weight make_weight(const WeightSpec& w) { return core::Weight(w.coef, w.exponent, w.decay, w.lo, w.hi); }

core::Problem make_problem(const ProblemConfig& c) {
  return core::Problem(make_boundaries(c.boundaries), core::WeightPair(make_weight(c.v), make_weight(c.w), c.p),
                       c.tolerances);
}

}  // namespace hslab::cli
