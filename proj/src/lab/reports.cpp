#include "hslab/lab/reports.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hslab/errors.hpp"
#include "hslab/parallel.hpp"

namespace hslab::lab {

double s_at(std::span<const double> s, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > s.size()) return 0.0;
  return s[static_cast<std::size_t>(n) - 1];
}

KeyCheck lemma_key_checks(const EpsPartition& partition, std::span<const double> s_coarse,
                          std::span<const double> s_fine) {
  KeyCheck k;
  k.eps = partition.eps;
  k.intervals = static_cast<int>(partition.part.intervals());
  k.full = std::max(0, partition.full_intervals());
  k.non_monotone = partition.non_monotone;

  k.n_key = k.full / 7;
  k.key_applicable = k.n_key >= 1;
  if (k.key_applicable) {
    k.key_coarse = s_at(s_coarse, k.n_key);
    k.key_fine = s_at(s_fine, k.n_key);
    k.key_pass = std::min(k.key_coarse, k.key_fine) >= 0.5 * k.eps;
  }

  k.n_key2 = k.full;
  k.key2_bound = std::sqrt(7.0) * k.eps;
  k.key2_coarse = s_at(s_coarse, k.n_key2 + 2);
  k.key2_fine = s_at(s_fine, k.n_key2 + 2);
  k.key2_pass = std::max(k.key2_coarse, k.key2_fine) <= k.key2_bound;
  return k;
}

RatioReport theorem_ratio_report(std::span<const double> alphas, std::span<const NuValues> nu,
                                 std::span<const MuValue> mu, std::span<const double> s,
                                 double beta_p, double gamma_p) {
  RatioReport r;
  r.beta_p = beta_p;
  r.gamma_p = gamma_p;
  std::vector<double> nus, mus;
  for (const auto& n : nu) nus.push_back(n.nu);
  for (const auto& m : mu) mus.push_back(m.value);
  r.norm = s.empty() ? 0.0 : s.front();
  for (double t : nus) r.sup_nu = std::max(r.sup_nu, t);
  for (double t : mus) r.sup_mu = std::max(r.sup_mu, t);
  r.r3_defined = r.sup_nu > 0.0;
  r.r4_defined = r.sup_mu > 0.0;
  r.r3 = r.r3_defined ? r.norm / r.sup_nu : std::nan("");
  r.r4 = r.r4_defined ? r.norm / r.sup_mu : std::nan("");

  std::vector<double> sorted(alphas.begin(), alphas.end());
  std::sort(sorted.begin(), sorted.end());
  for (double a : sorted) {
    RatioRow row;
    row.alpha = a;
    row.nu = schatten_sum(nus, a);
    row.s = schatten_sum(s, a);
    row.mu = schatten_sum(mus, a);
    row.r1_defined = row.s.norm > 0.0 && std::isfinite(row.s.norm) && std::isfinite(row.nu.norm);
    row.r2_defined = row.mu.norm > 0.0 && std::isfinite(row.mu.norm) && std::isfinite(row.s.norm);
    row.r1 = row.r1_defined ? row.nu.norm / row.s.norm : std::nan("");
    row.r2 = row.r2_defined ? row.s.norm / row.mu.norm : std::nan("");
    const bool fn = std::isfinite(row.nu.power_sum), fs = std::isfinite(row.s.power_sum),
               fm = std::isfinite(row.mu.power_sum);
    row.finite_together = (fn == fs) && (fs == fm);
    if (!r.rows.empty()) {
      const auto& prev = r.rows.back();
      auto ok = [](double now, double before) { return now <= before * (1.0 + 1e-12); };
      r.monotone_in_alpha = r.monotone_in_alpha && ok(row.nu.norm, prev.nu.norm) &&
                            ok(row.s.norm, prev.s.norm) && ok(row.mu.norm, prev.mu.norm);
    }
    r.rows.push_back(row);
  }
  return r;
}

BlockSplitReport block_split_diagnostic(const FairwayMap& fairway, const GridSystem& grid,
                                        const Resolution& res, std::span<const double> alphas,
                                        bool with_spectra) {
  const auto& pr = fairway.problem();
  const auto& cells = grid.cells();
  const auto& xi = grid.xi().xi;
  DiscretizeOptions o;
  o.res = res;
  for (const auto& cell : cells) {
    o.x_breaks.push_back(cell.xi_lo());
    o.x_breaks.push_back(cell.x0());
    o.y_breaks.push_back(pr.b(cell.xi_lo()));
  }
  const auto op = discretize(pr, grid.lo(), grid.hi(), o);
  const std::size_t nx = op.x.size(), ny = op.y.size();

  BlockSplitReport rep;
  rep.rows = op.rows();
  rep.cols = op.cols();
  const char* names[4] = {"T1", "T2", "S1", "S2"};
  rep.blocks.resize(4);
  for (int f = 0; f < 4; ++f) {
    rep.blocks[static_cast<std::size_t>(f)].name = names[f];
    rep.blocks[static_cast<std::size_t>(f)].matrix.assign(nx * ny, 0.0);
  }
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = op.x[i];
    const auto kc = static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(std::upper_bound(xi.begin(), xi.end(), x) - xi.begin() - 1, 0,
                                   static_cast<std::ptrdiff_t>(cells.size()) - 1));
    const double x0 = cells[kc].x0();
    const double split = pr.b(cells[kc].xi_lo());
    const double ax = pr.a(x), bx = pr.b(x);
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = op.y[j];
      const bool lower_y = y >= ax && y <= split;
      const bool upper_y = y >= split && y <= bx;
      const bool claims[4] = {x >= x0 && lower_y, x <= x0 && lower_y, x <= x0 && upper_y, x >= x0 && upper_y};
      const int n = claims[0] + claims[1] + claims[2] + claims[3];
      const bool support = static_cast<int>(j) >= op.col_begin[i] && static_cast<int>(j) < op.col_end[i];
      if (support && n > 1) ++rep.overclaimed;
      if (support && n == 0) ++rep.unclaimed;
      if (!support && n > 0) ++rep.stray;
      for (int f = 0; f < 4; ++f)
        if (claims[f]) rep.blocks[static_cast<std::size_t>(f)].matrix[i * ny + j] = op.matrix[i * ny + j];
    }
  }
  double full2 = 0.0, err2 = 0.0;
  for (std::size_t q = 0; q < nx * ny; ++q) {
    double sum = 0.0;
    for (const auto& b : rep.blocks) sum += b.matrix[q];
    const double d = op.matrix[q] - sum;
    full2 += op.matrix[q] * op.matrix[q];
    err2 += d * d;
  }
  rep.frobenius_full = std::sqrt(full2);
  rep.reconstruction_error = full2 > 0.0 ? std::sqrt(err2 / full2) : std::sqrt(err2);
  if (with_spectra) {
    for (auto& b : rep.blocks) {
      b.s = singular_values(b.matrix, rep.rows, rep.cols);
      for (double a : alphas) b.sums.push_back(schatten_sum(b.s, a));
    }
  }
  return rep;
}

UnionCheck block_union_check(const core::Problem& problem, std::span<const double> c, int parity,
                             const Resolution& res) {
  if (c.size() < 2) throw DomainError("operator-lab", "partition needs at least one interval");
  DiscretizeOptions o;
  o.res = res;
  o.x_breaks.assign(c.begin() + 1, c.end() - 1);
  for (double t : c) {
    o.y_breaks.push_back(problem.a(t));
    o.y_breaks.push_back(problem.b(t));
  }
  const auto op = discretize(problem, c.front(), c.back(), o);
  const std::size_t nx = op.x.size(), ny = op.y.size();
  auto interval_of = [&](double x) {
    return static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), x) - c.begin() - 1);
  };
  std::vector<double> masked(nx * ny, 0.0);
  std::vector<std::vector<std::size_t>> rows_of(c.size() - 1);
  for (std::size_t i = 0; i < nx; ++i) {
    const auto n = interval_of(op.x[i]);
    if (static_cast<int>(n % 2) != parity) continue;
    rows_of[n].push_back(i);
    std::copy_n(op.matrix.begin() + static_cast<std::ptrdiff_t>(i * ny), ny,
                masked.begin() + static_cast<std::ptrdiff_t>(i * ny));
  }
  UnionCheck u;
  std::vector<double> pooled;
  int prev_end = -1;
  for (const auto& rows : rows_of) {
    if (rows.empty()) continue;
    ++u.blocks;
    int jb = static_cast<int>(ny), je = 0;
    for (auto i : rows) {
      if (op.col_end[i] > op.col_begin[i]) {
        jb = std::min(jb, op.col_begin[i]);
        je = std::max(je, op.col_end[i]);
      }
    }
    if (je <= jb) continue;
    if (jb < prev_end) u.disjoint_columns = false;
    prev_end = std::max(prev_end, je);
    const auto w = static_cast<std::size_t>(je - jb);
    std::vector<double> block(rows.size() * w);
    for (std::size_t r = 0; r < rows.size(); ++r)
      std::copy_n(op.matrix.begin() + static_cast<std::ptrdiff_t>(rows[r] * ny + static_cast<std::size_t>(jb)), w,
                  block.begin() + static_cast<std::ptrdiff_t>(r * w));
    const auto s = singular_values(block, static_cast<int>(rows.size()), static_cast<int>(w));
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  std::sort(pooled.begin(), pooled.end(), std::greater<>());
  const auto whole = singular_values(masked, static_cast<int>(nx), static_cast<int>(ny));
  u.s1 = whole.empty() ? 0.0 : whole.front();
  const std::size_t n = std::max(pooled.size(), whole.size());
  for (std::size_t q = 0; q < n; ++q) {
    const double a = q < pooled.size() ? pooled[q] : 0.0;
    const double b = q < whole.size() ? whole[q] : 0.0;
    u.max_abs_diff = std::max(u.max_abs_diff, std::abs(a - b));
  }
  return u;
}

std::vector<ViewlessRow> viewless_report(const core::Problem& problem, const Partition& partition,
                                         std::span<const NuValues> nu) {
  std::vector<ViewlessRow> out;
  for (std::size_t n = 0; n < partition.intervals(); ++n) {
    const double d = partition.c[n], e = partition.c[n + 1];
    double c;
    try {
      c = median_point(problem, d, e);
    } catch (const ZeroMassError&) {
      continue;
    }
    ViewlessRow row;
    row.interval = static_cast<int>(n);
    row.lo = std::max(d, problem.b_inv(problem.a(c)));
    row.hi = std::min(e, problem.a_inv(problem.b(c)));
    if (row.hi > row.lo) {
      for (const auto& v : nu)
        if (v.xi_lo >= d && v.xi_hi <= e && v.argmax >= row.lo && v.argmax <= row.hi) row.cells_inside.push_back(v.k);
    } else {
      row.lo = row.hi = c;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace hslab::lab
