#include "hslab/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>

#include "hslab/fairway.hpp"
#include "hslab/functionals.hpp"
#include "hslab/grids.hpp"
#include "hslab/lab/reports.hpp"

namespace hslab::cli {

namespace {
constexpr const char* kModule = "cli";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no NaN or infinity: those become strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> cols) : width_(cols.size()) { add(cols); }

  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    add(r);
  }
  std::string str() const { return text_; }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  void add(const std::vector<std::string>& r) {
    if (r.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < r.size(); ++i) text_ += (i ? "," : "") + r[i];
    text_ += "\n";
  }
  std::size_t width_;
  std::string text_;
};

// Shared lazily built state of one command run.
class Session {
 public:
  Session(const ProblemConfig& c, RunReport& run) : cfg(c), run_(run), pr_(make_problem(c)) {}

  const ProblemConfig& cfg;

  const core::Problem& problem() const { return pr_; }
  const FairwayMap& fairway() {
    if (!fm_) fm_ = std::make_unique<FairwayMap>(pr_);
    return *fm_;
  }
  const GridSystem& grid() {
    if (!grid_) grid_ = std::make_unique<GridSystem>(GridSystem::build(fairway(), cfg.t_lo, cfg.t_hi, cfg.anchor));
    return *grid_;
  }
  const Functionals& fn() {
    if (!fn_) fn_ = std::make_unique<Functionals>(fairway(), grid());
    return *fn_;
  }
  const std::vector<NuValues>& nu() {
    if (!nu_) nu_ = fn().nu_all(cfg.nu);
    return *nu_;
  }
  const std::vector<MuValue>& mu() {
    if (!mu_) mu_ = fn().mu_all();
    return *mu_;
  }
  // Spectrum on the raw window at the configured (or doubled) resolution.
  const std::vector<double>& spectrum(bool fine) {
    auto& slot = fine ? s_fine_ : s_coarse_;
    if (!slot) {
      lab::DiscretizeOptions o;
      o.res = fine ? cfg.resolution.doubled() : cfg.resolution;
      if (o.res.nx > lab::kMaxNx || o.res.ny > lab::kMaxNy) o.res = cfg.resolution;
      slot = lab::spectrum(lab::discretize(pr_, cfg.t_lo, cfg.t_hi, o)).s;
    }
    return *slot;
  }
  // Spectrum on the grid window, the same truncation the functionals use.
  const std::vector<double>& spectrum_on_grid() {
    if (!s_grid_) {
      lab::DiscretizeOptions o;
      o.res = cfg.resolution;
      s_grid_ = lab::spectrum(lab::discretize(pr_, grid().lo(), grid().hi(), o)).s;
    }
    return *s_grid_;
  }

  json& results(const std::string& section) { return run_.report["results"][section]; }
  void table(const std::string& name, const Csv& csv) { run_.tables.emplace_back(name, csv.str()); }
  void check(const std::string& name, bool pass, json detail = json::object()) {
    json c;
    c["name"] = name;
    c["pass"] = pass;
    c["detail"] = std::move(detail);
    run_.report["checks"].push_back(std::move(c));
    run_.pass = run_.pass && pass;
  }

 private:
  RunReport& run_;
  core::Problem pr_;
  std::unique_ptr<FairwayMap> fm_;
  std::unique_ptr<GridSystem> grid_;
  std::unique_ptr<Functionals> fn_;
  std::optional<std::vector<NuValues>> nu_;
  std::optional<std::vector<MuValue>> mu_;
  std::optional<std::vector<double>> s_coarse_, s_fine_, s_grid_;
};

bool example_family(const ProblemConfig& c) {
  return c.boundaries.family == "linear" && c.v.exponent == 0.0 && c.v.decay == 0.0 && c.v.lo == 0.0 &&
         std::isinf(c.v.hi) && c.v.coef > 0.0;
}

void sec_fairway(Session& s) {
  auto& r = s.results("fairway");
  const auto& cfg = s.cfg;
  const bool closed = example_family(cfg);
  Csv csv({"t", "sigma", "balance_residual", "sigma_closed_form"});
  try {
    const auto& fm = s.fairway();
    const auto samples = fm.tabulate(cfg.t_lo, cfg.t_hi, cfg.fairway_samples);
    double max_res = 0.0, max_err = 0.0;
    for (const auto& smp : samples) {
      const double cf = closed ? 0.5 * (cfg.boundaries.A + cfg.boundaries.B) * smp.t : std::nan("");
      if (closed) max_err = std::max(max_err, std::abs(smp.sigma - cf) / smp.t);
      max_res = std::max(max_res, smp.residual);
      csv.row(smp.t, smp.sigma, smp.residual, cf);
    }
    const int bad = fm.monotonicity_violations(cfg.t_lo, cfg.t_hi, 4 * cfg.fairway_samples);
    r["scaling_form"] = fm.scaling_form();
    if (fm.scaling_form()) r["scaling_coef"] = fm.scaling_coef();
    r["samples"] = cfg.fairway_samples;
    r["max_balance_residual"] = max_res;
    r["monotonicity_violations"] = bad;
    s.check("fairway.balance", max_res <= cfg.tolerances.fair, {{"max_relative_residual", max_res}});
    s.check("fairway.monotone", bad == 0, {{"violations", bad}});
    if (closed) {
      r["max_closed_form_error_over_t"] = max_err;
      s.check("fairway.closed_form", max_err <= 1e-8, {{"max_abs_error_over_t", max_err}});
    }
  } catch (const ZeroMassError& e) {
    r["sigma"] = "undefined";
    r["reason"] = e.what();
    s.check("fairway.balance", true, {{"vacuous", "v has no mass on some [a(t), b(t)]"}});
  }
  s.table("fairway.csv", csv);
}

void sec_grids(Session& s) {
  auto& r = s.results("grids");
  const auto& pr = s.problem();
  const auto& g = s.grid();
  const auto& xi = g.xi();
  r["anchor"] = xi.anchor;
  r["k_min"] = xi.k_min;
  r["k_max"] = xi.k_max();
  r["snapped_window"] = {g.lo(), g.hi()};
  r["xi"] = xi.xi;
  double tele = 0.0;
  for (std::size_t i = 0; i + 1 < xi.xi.size(); ++i)
    tele = std::max(tele, std::abs(pr.a(xi.xi[i + 1]) - pr.b(xi.xi[i])) / pr.b(xi.xi[i]));
  int degenerate = 0;
  Csv csv({"k", "j", "x", "xi_k", "xi_k1", "degenerate"});
  for (const auto& cell : g.cells()) {
    degenerate += cell.degenerate;
    for (int j = -cell.j_a; j <= cell.j_b; ++j)
      csv.row(cell.k, j, cell.point(j), cell.xi_lo(), cell.xi_hi(), cell.degenerate);
  }
  r["telescoping_residual"] = tele;
  r["degenerate_cells"] = degenerate;
  r["mu_cells"] = static_cast<long long>(g.mu_cells().size());
  s.check("grids.telescoping", tele <= 1e-10, {{"max_relative_residual", tele}});
  s.table("grid.csv", csv);
}

void sec_functionals(Session& s) {
  auto& r = s.results("functionals");
  const auto& cfg = s.cfg;
  const auto& fn = s.fn();
  const auto& nu = s.nu();
  const auto& mu = s.mu();
  Csv nu_csv({"k", "xi_k", "xi_k1", "nu_tilde", "nu_bar", "nu"});
  long long violations = 0;
  for (const auto& v : nu) {
    nu_csv.row(v.k, v.xi_lo, v.xi_hi, v.nu_tilde, v.nu_bar, v.nu);
    if (v.nu_tilde > v.nu_bar + 1e-12 || v.nu_bar > v.nu + 1e-12) ++violations;
  }
  Csv mu_csv({"m", "k", "j", "x_lo", "x_hi", "mu"});
  for (const auto& m : mu) mu_csv.row(m.m, m.k, m.j, m.lo, m.hi, m.value);
  s.table("nu.csv", nu_csv);
  s.table("mu.csv", mu_csv);
  s.check("functionals.nu_ordering", violations == 0, {{"violations", violations}, {"cells", static_cast<long long>(nu.size())}});

  std::vector<double> nus, mus;
  for (const auto& v : nu) nus.push_back(v.nu);
  for (const auto& m : mu) mus.push_back(m.value);
  json per_alpha = json::array();
  for (double a : cfg.alpha) {
    json row;
    row["alpha"] = a;
    row["sum_nu"] = num(schatten_sum(nus, a).power_sum);
    const double smu = schatten_sum(mus, a).power_sum;
    row["sum_mu"] = num(smu);
    auto guarded = [&](const char* key, const std::function<ScalarFunctional()>& f) {
      try {
        const auto v = f();
        row[key] = num(v.power);
        return v.power;
      } catch (const Error& e) {
        row[key] = json{{"error", e.code()}};
        return std::nan("");
      }
    };
    const double V = guarded("V_alpha", [&] { return fn.functional_V(a); });
    const double W = guarded("W_alpha", [&] { return fn.functional_W(a); });
    row["mu_over_V"] = num(V > 0 ? smu / V : std::nan(""));
    row["mu_over_W"] = num(W > 0 ? smu / W : std::nan(""));
    if (example_family(cfg)) guarded("F_alpha_sum", [&] { return fn.example_F_sum(a); });
    const auto tail = fn.nu_tilde_tail(a, nu);
    row["nu_tilde_tail"] = {{"lower", num(tail.lower)}, {"upper", num(tail.upper)}, {"relative", num(tail.relative)},
                            {"certified", tail.certified}};
    per_alpha.push_back(row);
  }
  if (example_family(cfg)) {
    Csv f_csv({"alpha", "k", "F_cell"});
    for (double a : cfg.alpha)
      for (const auto& v : nu) f_csv.row(a, v.k, fn.example_F_cell(a, v.k).power);
    s.table("F_cells.csv", f_csv);
  }
  r["cells"] = static_cast<long long>(nu.size());
  r["mu_cells"] = static_cast<long long>(mu.size());
  r["per_alpha"] = per_alpha;
}

void sec_holder(Session& s) {
  const auto& cfg = s.cfg;
  const auto& fn = s.fn();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  long long checked = 0, failed = 0;
  double worst = 0.0;
  for (const auto& m : s.grid().mu_cells()) {
    for (int set = 0; set < cfg.holder_cut_sets; ++set) {
      std::vector<double> cuts;
      for (int q = 0; q < 5; ++q) cuts.push_back(m.lo + (m.hi - m.lo) * (0.001 + 0.998 * U(rng)));
      std::sort(cuts.begin(), cuts.end());
      const auto h = fn.holder_subdivision_check(m.lo, m.hi, cuts, cfg.holder_tol);
      ++checked;
      failed += !h.holds;
      if (h.rhs > 0) worst = std::max(worst, h.lhs / h.rhs);
    }
  }
  s.results("holder") = {{"checked", checked}, {"failed", failed}, {"max_lhs_over_rhs", worst}};
  s.check("functionals.holder", failed == 0, {{"checked", checked}, {"failed", failed}});
}

void sec_spectrum(Session& s) {
  auto& r = s.results("spectrum");
  const auto& cfg = s.cfg;
  const auto& sv = s.spectrum(false);
  Csv csv({"n", "s"});
  for (std::size_t n = 0; n < sv.size(); ++n) csv.row(static_cast<int>(n + 1), sv[n]);
  s.table("spectrum.csv", csv);
  r["window"] = {cfg.t_lo, cfg.t_hi};
  r["resolution"] = {{"nx", cfg.resolution.nx}, {"ny", cfg.resolution.ny}, {"order", cfg.resolution.x_order}};
  r["count"] = static_cast<long long>(sv.size());
  r["s1"] = sv.empty() ? 0.0 : sv.front();
  json sums = json::array();
  for (double a : cfg.alpha) {
    const auto ss = schatten_sum(sv, a);
    sums.push_back({{"alpha", a}, {"norm", num(ss.norm)}, {"overflow", ss.overflow}});
  }
  r["schatten"] = sums;
  bool nonincreasing = true;
  for (std::size_t n = 1; n < sv.size(); ++n) nonincreasing = nonincreasing && sv[n] <= sv[n - 1];
  s.check("spectrum.nonincreasing", nonincreasing);
  if (cfg.refine_spectrum && cfg.resolution.doubled().nx <= lab::kMaxNx && cfg.resolution.doubled().ny <= lab::kMaxNy) {
    const auto& fine = s.spectrum(true);
    double change = 0.0;
    const std::size_t cnt = std::min<std::size_t>({10, sv.size(), fine.size()});
    for (std::size_t n = 0; n < cnt; ++n) {
      const double d = std::abs(sv[n] - fine[n]);
      if (fine[n] > 0) change = std::max(change, d / fine[n]);
      else if (d > 0) change = std::numeric_limits<double>::infinity();
    }
    r["refinement_max_rel_change"] = num(change);
    s.check("spectrum.self_convergence", change <= 1e-3, {{"max_rel_change_s1_to_s10", num(change)}});
  }
}

std::vector<std::pair<double, double>> kappa_intervals(const ProblemConfig& cfg) {
  auto iv = cfg.kappa_intervals;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double L = std::log(cfg.t_hi / cfg.t_lo);
  for (int i = 0; i < cfg.kappa_random; ++i) {
    const double d = cfg.t_lo * std::exp(0.9 * L * U(rng));
    const double room = std::log(cfg.t_hi / d);
    const double e = d * std::exp(room * (0.05 + 0.95 * U(rng)));
    iv.emplace_back(d, e);
  }
  return iv;
}

void sec_kappa(Session& s) {
  const auto& cfg = s.cfg;
  auto& r = s.results("kappa");
  const lab::KappaEvaluator coarse(s.problem(), {cfg.kappa_resolution});
  const lab::KappaEvaluator fine(s.problem(), {cfg.kappa_resolution.doubled()});
  Csv csv({"d", "e", "c", "kappa", "lower", "upper", "kappa_fine", "lower_fine", "upper_fine", "viewless_lo",
           "viewless_hi", "sandwich"});
  long long failed = 0;
  const auto iv = kappa_intervals(cfg);
  for (const auto& [d, e] : iv) {
    const auto k1 = coarse.estimate(d, e);
    const auto k2 = fine.estimate(d, e);
    const double tol = 1e-3;
    const bool ok = k1.lower <= k1.kappa * (1 + tol) && k1.kappa <= k1.upper * (1 + tol) &&
                    k2.lower <= k2.kappa * (1 + tol) && k2.kappa <= k2.upper * (1 + tol);
    failed += !ok;
    csv.row(d, e, k1.c, k1.kappa, k1.lower, k1.upper, k2.kappa, k2.lower, k2.upper, k1.viewless_lo, k1.viewless_hi, ok);
  }
  s.table("kappa.csv", csv);
  r["intervals"] = static_cast<long long>(iv.size());
  r["lower_bound_support"] = "f supported in [a(d), a(c)] and in [b(c), b(e)]; the printed [b(c), b(d)] is empty";
  s.check("kappa.sandwich", failed == 0, {{"intervals", static_cast<long long>(iv.size())}, {"failed", failed}});
}

void sec_partition(Session& s, bool with_viewless) {
  const auto& cfg = s.cfg;
  auto& r = s.results("partition");
  const auto& sc = s.spectrum(false);
  const auto& sf = s.spectrum(true);
  const double norm = sc.empty() ? 0.0 : sc.front();
  r["norm"] = norm;
  Csv csv({"eps", "n", "c_n", "c_n1", "kappa", "class"});
  Csv vz({"eps", "n", "zone_lo", "zone_hi", "cells_with_nu_argmax_inside"});
  json rows = json::array();
  if (norm == 0.0) {
    r["note"] = "operator vanishes on the window: every ε gives one interval";
    s.check("partition.key", true, {{"vacuous", true}});
    s.check("partition.key2", true, {{"vacuous", true}});
  } else {
    const lab::KappaEvaluator kap(s.problem(), {cfg.kappa_resolution});
    bool key_ok = true, key2_ok = true;
    for (double f : cfg.eps_fractions) {
      const double eps = f * norm;
      const auto part = lab::epsilon_partition(kap, eps, cfg.t_lo, cfg.t_hi);
      const auto k = lab::lemma_key_checks(part, sc, sf);
      for (std::size_t n = 0; n < part.part.intervals(); ++n)
        csv.row(eps, static_cast<int>(n), part.part.c[n], part.part.c[n + 1], part.part.kappa[n],
                to_string(part.part.cls[n]));
      json row;
      row["eps_fraction"] = f;
      row["eps"] = eps;
      row["intervals"] = k.intervals;
      row["full_intervals"] = k.full;
      row["kappa_evaluations"] = part.evaluations;
      row["non_monotone_warning"] = part.non_monotone;
      row["key"] = {{"N", k.n_key}, {"applicable", k.key_applicable}, {"s_N", {k.key_coarse, k.key_fine}},
                    {"bound", 0.5 * eps}, {"pass", k.key_pass}};
      row["key2"] = {{"N", k.n_key2}, {"s_N_plus_2", {k.key2_coarse, k.key2_fine}}, {"bound", k.key2_bound},
                     {"pass", k.key2_pass}};
      rows.push_back(row);
      key_ok = key_ok && k.key_pass;
      key2_ok = key2_ok && k.key2_pass;
      if (with_viewless) {
        for (const auto& v : lab::viewless_report(s.problem(), part.part, s.nu())) {
          std::string ks;
          for (int kk : v.cells_inside) ks += (ks.empty() ? "" : " ") + std::to_string(kk);
          vz.row(eps, v.interval, v.lo, v.hi, ks);
        }
      }
    }
    s.check("partition.key", key_ok);
    s.check("partition.key2", key2_ok);
  }
  r["eps"] = rows;
  s.table("partition.csv", csv);
  if (with_viewless) s.table("viewless.csv", vz);
}

void sec_ratios(Session& s) {
  const auto& cfg = s.cfg;
  const auto rep = lab::theorem_ratio_report(cfg.alpha, s.nu(), s.mu(), s.spectrum_on_grid(), cfg.beta_p, cfg.gamma_p);
  auto& r = s.results("ratios");
  json rows = json::array();
  bool finite = true;
  for (const auto& row : rep.rows) {
    rows.push_back({{"alpha", row.alpha},
                    {"sum_nu", num(row.nu.power_sum)},
                    {"sum_s", num(row.s.power_sum)},
                    {"sum_mu", num(row.mu.power_sum)},
                    {"r1", num(row.r1)},
                    {"r2", num(row.r2)},
                    {"finite_together", row.finite_together}});
    finite = finite && row.finite_together;
  }
  r["rows"] = rows;
  r["norm"] = rep.norm;
  r["sup_nu"] = rep.sup_nu;
  r["sup_mu"] = rep.sup_mu;
  r["r3_norm_over_sup_nu"] = num(rep.r3);
  r["r4_norm_over_sup_mu"] = num(rep.r4);
  r["beta_p"] = rep.beta_p;
  r["gamma_p"] = rep.gamma_p;
  s.check("ratios.finite_together", finite);
  s.check("ratios.schatten_monotone_in_alpha", rep.monotone_in_alpha);
}

void sec_blocks(Session& s) {
  const auto& cfg = s.cfg;
  const auto rep = lab::block_split_diagnostic(s.fairway(), s.grid(), cfg.resolution, cfg.alpha);
  auto& r = s.results("block_split");
  r["reconstruction_error"] = rep.reconstruction_error;
  r["overclaimed"] = rep.overclaimed;
  r["unclaimed"] = rep.unclaimed;
  r["stray"] = rep.stray;
  json blocks = json::array();
  for (const auto& b : rep.blocks) {
    json sums = json::array();
    for (std::size_t i = 0; i < b.sums.size(); ++i) sums.push_back({{"alpha", cfg.alpha[i]}, {"norm", num(b.sums[i].norm)}});
    blocks.push_back({{"name", b.name}, {"s1", b.s.empty() ? 0.0 : b.s.front()}, {"schatten", sums}});
  }
  r["blocks"] = blocks;
  s.check("block_split.reconstruction", rep.reconstruction_error <= 1e-8, {{"relative_frobenius", rep.reconstruction_error}});
  s.check("block_split.disjoint", rep.overclaimed == 0 && rep.unclaimed == 0 && rep.stray == 0);
}

bool p_is_two(Session& s, const std::string& what) {
  if (s.cfg.p == 2.0) return true;
  s.results(what) = {{"skipped", "spectral checks run at p = 2 only"}};
  return false;
}

void cmd_sweep(Session& s) {
  const auto& cfg = s.cfg;
  if (cfg.boundaries.family != "linear") throw ConfigError(kModule, "sweep varies B/A and needs the linear family");
  Csv csv({"ratio", "alpha", "sum_nu", "sum_s", "sum_mu", "r1", "r2", "finite_together"});
  std::map<double, std::vector<double>> r1s, r2s;
  std::vector<double> all1, all2;
  bool finite = true;
  for (double ratio : cfg.sweep_ratios) {
    ProblemConfig c = cfg;
    c.boundaries.B = c.boundaries.A * ratio;
    RunReport scratch;
    Session sub(c, scratch);
    std::vector<double> sv;
    if (c.p == 2.0) sv = sub.spectrum_on_grid();
    const auto rep = lab::theorem_ratio_report(c.alpha, sub.nu(), sub.mu(), sv, c.beta_p, c.gamma_p);
    for (const auto& row : rep.rows) {
      csv.row(ratio, row.alpha, row.nu.power_sum, row.s.power_sum, row.mu.power_sum, row.r1, row.r2,
              row.finite_together);
      if (row.r1_defined) all1.push_back(row.r1);
      if (row.r2_defined) all2.push_back(row.r2);
      finite = finite && row.finite_together;
    }
  }
  s.table("sweep.csv", csv);
  auto spread = [](std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const double med = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    double worst = 1.0;
    for (double x : v) worst = std::max({worst, x / med, med / x});
    return worst;
  };
  auto& r = s.results("sweep");
  r["ratios"] = cfg.sweep_ratios;
  r["alpha"] = cfg.alpha;
  const double f1 = spread(all1), f2 = spread(all2);
  r["r1_max_factor_from_median"] = num(f1);
  r["r2_max_factor_from_median"] = num(f2);
  s.check("sweep.finite_together", finite);
  if (!std::isnan(f1)) s.check("sweep.r1_within_10x_of_median", f1 <= 10.0, {{"factor", f1}});
  if (!std::isnan(f2)) s.check("sweep.r2_within_10x_of_median", f2 <= 10.0, {{"factor", f2}});
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"fairway", "grids", "functionals", "spectrum",
                                              "kappa",   "partition", "verify", "sweep"};
  return names;
}

RunReport run_command(const std::string& cmd, const ProblemConfig& config) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), cmd) == names.end())
    throw ConfigError(kModule, "unknown command '" + cmd + "'");
  RunReport run;
  run.report["command"] = cmd;
  run.report["input"] = to_json(config);
  run.report["provenance"] = {
      {"tolerances", run.report["input"]["tolerances"]},
      {"resolution", run.report["input"]["resolution"]},
      {"kappa_resolution", run.report["input"]["kappa"]["resolution"]},
      {"seed", config.seed},
      {"nu", run.report["input"]["nu"]}};
  run.report["results"] = json::object();
  run.report["checks"] = json::array();
  Session s(config, run);
  if (cmd == "fairway") {
    sec_fairway(s);
  } else if (cmd == "grids") {
    sec_grids(s);
  } else if (cmd == "functionals") {
    sec_functionals(s);
  } else if (cmd == "spectrum") {
    if (config.p != 2.0) throw ConfigError(kModule, "spectrum needs p = 2");
    sec_spectrum(s);
  } else if (cmd == "kappa") {
    if (config.p != 2.0) throw ConfigError(kModule, "kappa needs p = 2");
    sec_kappa(s);
  } else if (cmd == "partition") {
    if (config.p != 2.0) throw ConfigError(kModule, "partition needs p = 2");
    sec_partition(s, false);
  } else if (cmd == "sweep") {
    cmd_sweep(s);
  } else {  // verify
    sec_fairway(s);
    sec_grids(s);
    sec_functionals(s);
    sec_holder(s);
    if (p_is_two(s, "spectrum")) {
      sec_spectrum(s);
      sec_kappa(s);
      sec_partition(s, true);
      sec_ratios(s);
      sec_blocks(s);
    }
  }
  run.report["pass"] = run.pass;
  return run;
}

void write_outputs(const RunReport& run, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError(kModule, "cannot create output directory " + out_dir + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw ConfigError(kModule, "cannot write " + name + " in " + out_dir);
    out << text;
  };
  put("report.json", run.report.dump(2) + "\n");
  for (const auto& [name, text] : run.tables) put(name, text);
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return 2;
    case ErrorKind::Numeric:
      return 3;
    case ErrorKind::Verification:
      return 4;
  }
  return 3;
}

}  // namespace hslab::cli
