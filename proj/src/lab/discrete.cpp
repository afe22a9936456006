#include "hslab/lab/discrete.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "hslab/errors.hpp"
#include "hslab/parallel.hpp"

namespace hslab::lab {

namespace {
constexpr const char* kModule = "operator-lab";
constexpr double kMergeRel = 1e-12;

void sort_merge(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  for (double t : v) {
    if (out.empty() || t > out.back() * (1.0 + kMergeRel)) out.push_back(t);
  }
  v.swap(out);
}

void keep_inside(std::vector<double>& v, double lo, double hi) {
  std::erase_if(v, [&](double t) { return !(t > lo && t < hi); });
}

std::vector<double> x_panel_breaks(double lo, double hi, int panels, std::span<const double> extra,
                                   const core::Weight& w) {
  std::vector<double> br;
  br.reserve(static_cast<std::size_t>(panels) + extra.size() + 3);
  const double L = std::log(hi / lo);
  for (int i = 0; i <= panels; ++i) br.push_back(lo * std::exp(L * i / panels));
  br.front() = lo;
  br.back() = hi;
  std::vector<double> more(extra.begin(), extra.end());
  more.push_back(w.support_lo());
  more.push_back(w.support_hi());
  keep_inside(more, lo, hi);
  br.insert(br.end(), more.begin(), more.end());
  sort_merge(br);
  return br;
}

// Splits log-widths so that the total cell count lands near `target`.
std::vector<double> refine_cells(const std::vector<double>& br, int target) {
  const std::size_t n = br.size() - 1;
  if (n == 0 || static_cast<int>(n) >= target) return br;
  std::vector<double> lw(n);
  for (std::size_t j = 0; j < n; ++j) lw[j] = std::log(br[j + 1] / br[j]);
  auto count = [&](double h) {
    double c = 0;
    for (double l : lw) c += std::max(1.0, std::ceil(l / h));
    return c;
  };
  double h_lo = 1e-300, h_hi = *std::max_element(lw.begin(), lw.end());
  for (int it = 0; it < 200 && h_hi > h_lo * (1 + 1e-12); ++it) {
    const double h = 0.5 * (h_lo + h_hi);
    if (count(h) > target) h_lo = h;
    else h_hi = h;
  }
  std::vector<int> parts(n);
  long long total = 0;
  for (std::size_t j = 0; j < n; ++j) total += parts[j] = static_cast<int>(std::max(1.0, std::ceil(lw[j] / h_hi)));
  // top up to the target by splitting the widest pieces
  std::priority_queue<std::pair<double, std::size_t>> widest;
  for (std::size_t j = 0; j < n; ++j) widest.emplace(lw[j] / parts[j], j);
  for (; total < target; ++total) {
    const auto j = widest.top().second;
    widest.pop();
    widest.emplace(lw[j] / ++parts[j], j);
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total) + 1);
  for (std::size_t j = 0; j < n; ++j) {
    const int m = parts[j];
    out.push_back(br[j]);
    for (int q = 1; q < m; ++q) out.push_back(br[j] * std::exp(lw[j] * q / m));
  }
  out.push_back(br.back());
  return out;
}

}  // namespace

DiscreteOperator discretize(const core::Problem& problem, double t_lo, double t_hi,
                            const DiscretizeOptions& opt) {
  if (problem.p() != 2.0)
    throw ConfigError(kModule, "spectra are computed at p = 2 only (got p = " + std::to_string(problem.p()) + ")");
  const auto& res = opt.res;
  if (res.nx < 1 || res.ny < 1 || res.x_order < 1 || res.nx > kMaxNx || res.ny > kMaxNy)
    throw ConfigError(kModule, "resolution outside [1, 4000] x [1, 8000]");
  if (!(t_lo > 0.0 && t_hi > t_lo && std::isfinite(t_hi)))
    throw DomainError(kModule, "window must satisfy 0 < t_lo < t_hi < inf");

  DiscreteOperator op;
  op.t_lo = t_lo;
  op.t_hi = t_hi;
  op.res = res;

  const int panels = std::max(1, (res.nx + res.x_order - 1) / res.x_order);
  const auto xb = x_panel_breaks(t_lo, t_hi, panels, opt.x_breaks, problem.w());
  auto nodes = core::log_gauss_panels(xb, res.x_order);
  op.x = std::move(nodes.x);
  op.omega = std::move(nodes.weight);
  const std::size_t nx = op.x.size();

  const auto& v = problem.v();
  const double y_lo = std::max(problem.a(t_lo), v.support_lo());
  const double y_hi = std::min(problem.b(t_hi), v.support_hi());
  std::vector<double> yb;
  if (y_hi > y_lo) {
    yb.reserve(2 * nx + opt.y_breaks.size() + 2);
    for (double xi : op.x) {
      yb.push_back(problem.a(xi));
      yb.push_back(problem.b(xi));
    }
    yb.insert(yb.end(), opt.y_breaks.begin(), opt.y_breaks.end());
    keep_inside(yb, y_lo, y_hi);
    yb.push_back(y_lo);
    yb.push_back(y_hi);
    sort_merge(yb);
    yb = refine_cells(yb, res.ny);
  } else {
    // v vanishes on the reachable range: one empty cell keeps the shape valid.
    const double y0 = problem.a(t_lo);
    yb = {y0, problem.b(t_hi) > y0 ? problem.b(t_hi) : y0 * 2};
  }
  op.y_breaks = yb;
  const std::size_t ny = yb.size() - 1;
  op.y.resize(ny);
  op.tau.resize(ny);
  op.col_scale.resize(ny);
  const bool v_active = y_hi > y_lo && !v.is_zero();
  parallel_for(
      static_cast<std::ptrdiff_t>(ny),
      [&](std::ptrdiff_t j) {
        const auto u = static_cast<std::size_t>(j);
        const double lo = yb[u], hi = yb[u + 1];
        op.y[u] = 0.5 * (lo + hi);
        op.tau[u] = hi - lo;
        op.col_scale[u] = v_active ? v.mass(1.0, lo, hi, 1e-12) / std::sqrt(hi - lo) : 0.0;
      },
      opt.parallel);

  op.row_scale.resize(nx);
  for (std::size_t i = 0; i < nx; ++i) op.row_scale[i] = std::sqrt(op.omega[i]) * problem.w()(op.x[i]);

  op.col_begin.assign(nx, 0);
  op.col_end.assign(nx, 0);
  op.matrix.assign(nx * ny, 0.0);
  if (opt.serial_reference) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double ai = problem.a(op.x[i]), bi = problem.b(op.x[i]);
      int first = -1, last = -1;
      for (std::size_t j = 0; j < ny; ++j) {
        if (op.y[j] >= ai && op.y[j] <= bi) {
          op.matrix[i * ny + j] = op.row_scale[i] * op.col_scale[j];
          if (first < 0) first = static_cast<int>(j);
          last = static_cast<int>(j);
        }
      }
      op.col_begin[i] = first < 0 ? 0 : first;
      op.col_end[i] = first < 0 ? 0 : last + 1;
    }
  } else {
    parallel_for(
        static_cast<std::ptrdiff_t>(nx),
        [&](std::ptrdiff_t ii) {
          const auto i = static_cast<std::size_t>(ii);
          const double ai = problem.a(op.x[i]), bi = problem.b(op.x[i]);
          const auto jb = std::lower_bound(op.y.begin(), op.y.end(), ai) - op.y.begin();
          const auto je = std::upper_bound(op.y.begin(), op.y.end(), bi) - op.y.begin();
          op.col_begin[i] = static_cast<int>(jb);
          op.col_end[i] = static_cast<int>(std::max(jb, je));
          double* row = op.matrix.data() + i * ny;
          for (auto j = jb; j < je; ++j) row[j] = op.row_scale[i] * op.col_scale[static_cast<std::size_t>(j)];
        },
        opt.parallel);
  }
  return op;
}

std::vector<double> singular_values(std::span<const double> a, int m, int n) {
  if (m <= 0 || n <= 0) return {};
  if (a.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(n))
    throw DomainError(kModule, "matrix size does not match its shape");
  std::vector<double> work(a.begin(), a.end());
  for (double t : work)
    if (!std::isfinite(t)) throw ConvergenceError(kModule, "matrix has non-finite entries");
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  double u_dummy = 0.0, vt_dummy = 0.0;
  const lapack_int info = LAPACKE_dgesdd(LAPACK_ROW_MAJOR, 'N', m, n, work.data(), n, s.data(),
                                         &u_dummy, m, &vt_dummy, n);
  if (info != 0)
    throw ConvergenceError(kModule, "dgesdd failed with info = " + std::to_string(info));
  // dgesdd already sorts; clamp the sign of roundoff-level zeros
  for (double& t : s) t = std::max(t, 0.0);
  return s;
}

SpectralReport spectrum(const DiscreteOperator& op) {
  SpectralReport r;
  r.rows = op.rows();
  r.cols = op.cols();
  r.s = singular_values(op.matrix, r.rows, r.cols);
  return r;
}

SpectralReport spectrum_with_refinement(const core::Problem& problem, double t_lo, double t_hi,
                                        const DiscretizeOptions& opt, int count) {
  auto r = spectrum(discretize(problem, t_lo, t_hi, opt));
  auto fine_opt = opt;
  fine_opt.res = opt.res.doubled();
  const auto fine = spectrum(discretize(problem, t_lo, t_hi, fine_opt));
  r.compared = true;
  r.compare_count = static_cast<int>(std::min<std::size_t>({static_cast<std::size_t>(count), r.s.size(), fine.s.size()}));
  for (int n = 0; n < r.compare_count; ++n) {
    const double ref = fine.s[static_cast<std::size_t>(n)];
    const double diff = std::abs(r.s[static_cast<std::size_t>(n)] - ref);
    if (ref > 0) r.max_rel_change = std::max(r.max_rel_change, diff / ref);
    else if (diff > 0) r.max_rel_change = std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace hslab::lab
