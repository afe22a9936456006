#include "hslab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hslab/core/quadrature.hpp"
#include "hslab/errors.hpp"
#include "hslab/parallel.hpp"

namespace hslab {

namespace {
constexpr const char* kModule = "functionals";

double root_or_zero(double x, double inv_exp) {
  if (x <= 0.0) return 0.0;
  return inv_exp == 1.0 ? x : std::pow(x, inv_exp);
}

// Sums in index order with Kahan compensation.
double ordered_sum(const std::vector<double>& parts) {
  double sum = 0.0, comp = 0.0;
  for (double x : parts) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}
}  // namespace

SchattenSum schatten_sum(std::span<const double> s, double alpha) {
  if (!(alpha > 0.0)) throw DomainError(kModule, "Schatten index must be positive");
  SchattenSum out;
  double sum = 0.0, comp = 0.0;
  for (double x : s) {
    if (!(x >= 0.0)) throw DomainError(kModule, "Schatten sum needs nonnegative terms");
    const double term = std::pow(x, alpha);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (!std::isfinite(sum)) {
      out.overflow = true;
      out.power_sum = out.norm = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  out.power_sum = sum;
  out.norm = std::pow(sum, 1.0 / alpha);
  return out;
}

Functionals::Functionals(const FairwayMap& fairway, const GridSystem& grid, bool clip_to_window)
    : fairway_(fairway),
      grid_(grid),
      pr_(fairway.problem()),
      clip_(clip_to_window),
      x_lo_(grid.lo()),
      x_hi_(grid.hi()) {}

double Functionals::w_mass_clipped(double lo, double hi) const {
  if (clip_) {
    lo = std::max(lo, x_lo_);
    hi = std::min(hi, x_hi_);
  }
  if (!(hi > lo)) return 0.0;
  return pr_.w_mass(lo, hi);
}

double Functionals::nu_tilde(double xi_lo, double xi_hi) const {
  const double wm = pr_.w_mass(xi_lo, xi_hi);
  if (wm == 0.0) return 0.0;
  double x0;
  try {
    x0 = fairway_.sigma_inverse(pr_.b(xi_lo));
  } catch (const ZeroMassError&) {
    return 0.0;
  }
  const double vm = pr_.v_mass(pr_.a(x0), pr_.b(x0));
  return root_or_zero(wm, 1.0 / pr_.p()) * root_or_zero(vm, 1.0 / pr_.pprime());
}

NuValues Functionals::nu_variants(const CellRefinement& cell, const NuOptions& opt) const {
  NuValues out;
  out.k = cell.k;
  const double lo = cell.xi_lo(), hi = cell.xi_hi();
  out.xi_lo = lo;
  out.xi_hi = hi;
  const double ip = 1.0 / pr_.p(), ipp = 1.0 / pr_.pprime();

  const double w_cell = w_mass_clipped(lo, hi);
  if (!cell.degenerate) {
    const double x0 = cell.x0();
    out.nu_tilde = root_or_zero(w_cell, ip) *
                   root_or_zero(pr_.v_mass(pr_.a(x0), pr_.b(x0)), ipp);
  }

  // (bar objective, full objective) at t; the full one adds the nonnegative
  // w-mass outside the cell to the same inner mass, so full >= bar exactly.
  struct Pair {
    double bar, full;
  };
  auto eval = [&](double t) -> Pair {
    const double vm = pr_.v_mass(pr_.a(t), pr_.b(t));
    if (vm == 0.0) return {0.0, 0.0};
    double s;
    try {
      s = fairway_.sigma(t);
    } catch (const ZeroMassError&) {
      return {0.0, 0.0};
    }
    const double L = pr_.b_inv(s), R = pr_.a_inv(s);
    const double inner = w_mass_clipped(std::max(L, lo), std::min(R, hi));
    double outer = 0.0;
    if (L < lo) outer += w_mass_clipped(L, lo);
    if (R > hi) outer += w_mass_clipped(hi, R);
    const double vp = root_or_zero(vm, ipp);
    return {root_or_zero(inner, ip) * vp, root_or_zero(inner + outer, ip) * vp};
  };

  const int n = std::max(opt.samples, 2);
  std::vector<double> ts(n), bar(n), full(n);
  const double span = std::log(hi / lo);
  parallel_for(
      n,
      [&](std::ptrdiff_t i) {
        ts[i] = lo * std::exp(span * (static_cast<double>(i) + 0.5) / n);
        const Pair v = eval(ts[i]);
        bar[i] = v.bar;
        full[i] = v.full;
      },
      false);

  auto best_two = [](const std::vector<double>& v) {
    std::size_t i1 = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i1]) i1 = i;
    double second = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (i != i1) second = std::max(second, v[i]);
    return std::pair<std::size_t, double>{i1, v[i1] - second};
  };

  // golden-section maximization of g over log t in [t_a, t_b]
  auto polish = [&](std::size_t i, bool use_bar, double& best, double& arg) {
    const double ua = std::log(i == 0 ? lo : ts[i - 1]);
    const double ub = std::log(i + 1 == ts.size() ? hi : ts[i + 1]);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = ua, b = ub;
    double c = b - g * (b - a), d = a + g * (b - a);
    auto f = [&](double u) {
      const Pair v = eval(std::exp(u));
      return use_bar ? v.bar : v.full;
    };
    double fc = f(c), fd = f(d);
    for (int it = 0; it < opt.golden_iters && (b - a) > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    if (fc > best) {
      best = fc;
      arg = std::exp(c);
    }
    if (fd > best) {
      best = fd;
      arg = std::exp(d);
    }
  };

  const auto [ib, gap_b] = best_two(bar);
  out.gap_bar = gap_b;
  out.nu_bar = bar[ib];
  out.argmax_bar = ts[ib];
  polish(ib, true, out.nu_bar, out.argmax_bar);
  if (out.nu_tilde > out.nu_bar && !cell.degenerate) {
    // the bar objective at t = x_0 equals ν̃
    out.nu_bar = out.nu_tilde;
    out.argmax_bar = cell.x0();
  }

  const auto [iff, gap_f] = best_two(full);
  out.gap = gap_f;
  out.nu = full[iff];
  out.argmax = ts[iff];
  polish(iff, false, out.nu, out.argmax);
  const Pair at_bar = eval(out.argmax_bar);
  if (at_bar.full > out.nu) {
    out.nu = at_bar.full;
    out.argmax = out.argmax_bar;
  }
  if (out.nu_bar > out.nu) {
    out.nu = out.nu_bar;
    out.argmax = out.argmax_bar;
  }
  return out;
}

std::vector<NuValues> Functionals::nu_all(const NuOptions& opt, bool parallel) const {
  const auto& cells = grid_.cells();
  std::vector<NuValues> out(cells.size());
  parallel_for(
      static_cast<std::ptrdiff_t>(cells.size()),
      [&](std::ptrdiff_t i) { out[i] = nu_variants(cells[i], opt); }, parallel);
  return out;
}

double Functionals::mu(double x_lo, double x_hi) const {
  const double wm = w_mass_clipped(x_lo, x_hi);
  if (wm == 0.0) return 0.0;
  const double vm = pr_.v_mass(pr_.a(x_lo), pr_.b(x_hi));
  return root_or_zero(wm, 1.0 / pr_.p()) * root_or_zero(vm, 1.0 / pr_.pprime());
}

std::vector<MuValue> Functionals::mu_all(bool parallel) const {
  const auto cells = grid_.mu_cells();
  std::vector<MuValue> out(cells.size());
  parallel_for(
      static_cast<std::ptrdiff_t>(cells.size()),
      [&](std::ptrdiff_t i) {
        const auto& c = cells[i];
        out[i] = {c.m, c.k, c.j, c.lo, c.hi, mu(c.lo, c.hi)};
      },
      parallel);
  return out;
}

HolderCheck Functionals::holder_subdivision_check(double x_lo, double x_hi,
                                                  std::span<const double> cuts, double tol) const {
  std::vector<double> c{x_lo};
  for (double x : cuts) {
    if (!(x > x_lo && x < x_hi)) throw DomainError(kModule, "cuts must lie inside (x_m, x_{m+1})");
    c.push_back(x);
  }
  c.push_back(x_hi);
  std::sort(c.begin(), c.end());
  const double ip = 1.0 / pr_.p(), ipp = 1.0 / pr_.pprime();
  std::vector<double> terms;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const double wm = w_mass_clipped(c[i], c[i + 1]);
    const double vm = pr_.v_mass(pr_.a(c[i]), pr_.a(c[i + 1])) +
                      pr_.v_mass(pr_.b(c[i]), pr_.b(c[i + 1]));
    terms.push_back(root_or_zero(wm, ip) * root_or_zero(vm, ipp));
  }
  HolderCheck out;
  out.lhs = ordered_sum(terms);
  out.rhs = mu(x_lo, x_hi);
  out.holds = out.lhs <= out.rhs * (1.0 + tol);
  return out;
}

ScalarFunctional Functionals::functional_V(double alpha, bool parallel) const {
  if (!(alpha > 0.0)) throw DomainError(kModule, "alpha must be positive");
  const double p = pr_.p(), pp = pr_.pprime();
  const double e_w = alpha / p, e_v = alpha / pp - 1.0;
  auto integrand = [&](double t) {
    const double vt = pr_.v().pow(t, pp);
    if (vt == 0.0) return 0.0;
    const double wm = w_mass_clipped(pr_.b_inv(t), pr_.a_inv(t));
    if (wm == 0.0) return 0.0;
    const double s = fairway_.sigma_inverse(t);
    const double vm = pr_.v_mass(pr_.a(s), pr_.b(s));
    if (vm == 0.0) return 0.0;
    return std::pow(wm, e_w) * std::pow(vm, e_v) * vt;
  };
  // y-segments [a(ξ_j), a(ξ_{j+1})] from a(X_lo) to b(X_hi)
  std::vector<double> ys;
  for (double xi : grid_.xi().xi) ys.push_back(pr_.a(xi));
  ys.push_back(pr_.b(grid_.hi()));
  std::vector<double> breaks;
  for (double s : {pr_.v().support_lo(), pr_.v().support_hi()})
    if (s > 0.0 && std::isfinite(s)) breaks.push_back(s);
  std::vector<double> parts(ys.size() - 1);
  parallel_for(
      static_cast<std::ptrdiff_t>(parts.size()),
      [&](std::ptrdiff_t i) {
        parts[i] = core::integrate(integrand, ys[i], ys[i + 1], pr_.tol().quad, breaks,
                                   pr_.tol().depth_cap);
      },
      parallel);
  ScalarFunctional out{alpha, ordered_sum(parts), 0.0};
  out.root = root_or_zero(out.power, 1.0 / alpha);
  return out;
}

ScalarFunctional Functionals::functional_W(double alpha, bool parallel) const {
  if (!(alpha > 0.0)) throw DomainError(kModule, "alpha must be positive");
  const double p = pr_.p(), pp = pr_.pprime();
  const double e_w = alpha / p - 1.0, e_v = alpha / pp;
  auto integrand = [&](double t) {
    const double wt = pr_.w().pow(t, p);
    if (wt == 0.0) return 0.0;
    const double vm = pr_.v_mass(pr_.a(t), pr_.b(t));
    if (vm == 0.0) return 0.0;
    const double s = fairway_.sigma(t);
    const double wm = w_mass_clipped(pr_.b_inv(s), pr_.a_inv(s));
    if (wm == 0.0) return 0.0;
    return std::pow(wm, e_w) * std::pow(vm, e_v) * wt;
  };
  const auto& cells = grid_.cells();
  std::vector<double> parts(cells.size());
  parallel_for(
      static_cast<std::ptrdiff_t>(cells.size()),
      [&](std::ptrdiff_t i) {
        const auto& cell = cells[i];
        std::vector<double> breaks(cell.x.begin() + 1, cell.x.end() - 1);
        for (double s : {pr_.w().support_lo(), pr_.w().support_hi()})
          if (s > 0.0 && std::isfinite(s)) breaks.push_back(s);
        parts[i] = core::integrate(integrand, cell.xi_lo(), cell.xi_hi(), pr_.tol().quad, breaks,
                                   pr_.tol().depth_cap);
      },
      parallel);
  ScalarFunctional out{alpha, ordered_sum(parts), 0.0};
  out.root = root_or_zero(out.power, 1.0 / alpha);
  return out;
}

void Functionals::require_example_family() const {
  const auto& v = pr_.v();
  const bool v_one = v.is_constant() && v.coef() == 1.0;
  if (pr_.bounds().family() != core::BoundaryPair::Family::Linear || !v_one)
    throw ConfigError(kModule, "the Example functional F needs linear boundaries and v = 1");
}

double Functionals::f_integrand_cell(double alpha, double t) const {
  const double p = pr_.p(), pp = pr_.pprime();
  const double wt = pr_.w().pow(t, p);
  if (wt == 0.0) return 0.0;
  const double s = fairway_.sigma(t);
  const double lo = pr_.b_inv(s), hi = pr_.a_inv(s);
  const double wm = hi > lo ? pr_.w_mass(lo, hi) : 0.0;
  if (wm == 0.0) return 0.0;
  return std::pow(wm, alpha / p - 1.0) * std::pow(pr_.b(t) - pr_.a(t), alpha / pp) * wt;
}

ScalarFunctional Functionals::example_F_cell(double alpha, int k) const {
  require_example_family();
  const double ratio = pr_.bounds().B() / pr_.bounds().A();
  const double lo = grid_.xi().anchor * std::pow(ratio, k), hi = lo * ratio;
  const double x0 = fairway_.sigma_inverse(pr_.b(lo));
  const double breaks[] = {x0};
  ScalarFunctional out{alpha, core::integrate([&](double t) { return f_integrand_cell(alpha, t); },
                                              lo, hi, pr_.tol().quad, breaks, pr_.tol().depth_cap),
                       0.0};
  out.root = root_or_zero(out.power, 1.0 / alpha);
  return out;
}

ScalarFunctional Functionals::example_F_sum(double alpha) const {
  require_example_family();
  std::vector<double> parts;
  for (const auto& cell : grid_.cells()) parts.push_back(example_F_cell(alpha, cell.k).power);
  ScalarFunctional out{alpha, ordered_sum(parts), 0.0};
  out.root = root_or_zero(out.power, 1.0 / alpha);
  return out;
}

TailEstimate Functionals::nu_tilde_tail(double alpha, std::span<const NuValues> in_window,
                                        int extra_cells, double tail_tol) const {
  TailEstimate out;
  double inside = 0.0;
  for (const auto& v : in_window) inside += std::pow(v.nu_tilde, alpha);
  const double inf = std::numeric_limits<double>::infinity();

  // Σ of the explicit extra cells plus a geometric remainder from the last ratio.
  auto side = [&](bool below) -> std::pair<double, bool> {
    std::vector<double> vals;
    double x = below ? grid_.lo() : grid_.hi();
    try {
      for (int j = 0; j < extra_cells; ++j) {
        double lo, hi;
        if (below) {
          hi = x;
          lo = pr_.b_inv(pr_.a(x));
          x = lo;
        } else {
          lo = x;
          hi = pr_.a_inv(pr_.b(x));
          x = hi;
        }
        if (!(lo > 0.0) || !std::isfinite(hi)) return {inf, false};
        vals.push_back(std::pow(nu_tilde(lo, hi), alpha));
      }
    } catch (const Error&) {
      return {inf, false};
    }
    double sum = 0.0;
    for (double v : vals) sum += v;
    if (vals.size() < 2) return {sum, false};
    const double last = vals.back(), prev = vals[vals.size() - 2];
    if (last == 0.0) return {sum, true};
    const double ratio = prev > 0.0 ? last / prev : inf;
    if (!(ratio < 1.0)) return {inf, false};
    return {sum + last * ratio / (1.0 - ratio), true};
  };
  const auto [lower, ok_lo] = side(true);
  const auto [upper, ok_hi] = side(false);
  out.lower = lower;
  out.upper = upper;
  out.relative = inside > 0.0 ? (lower + upper) / inside : (lower + upper > 0.0 ? inf : 0.0);
  out.certified = ok_lo && ok_hi && out.relative < tail_tol;
  return out;
}

}  // namespace hslab
