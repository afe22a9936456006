#include "hslab/lab/kappa.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/errors.hpp"

namespace hslab::lab {

namespace {
constexpr const char* kModule = "operator-lab";

DiscreteOperator local_operator(const core::Problem& pr, double d, double e, const Resolution& res,
                                std::vector<double> xb = {}, std::vector<double> yb = {}) {
  DiscretizeOptions o;
  o.res = res;
  o.parallel = false;
  o.x_breaks = std::move(xb);
  o.y_breaks = std::move(yb);
  return discretize(pr, d, e, o);
}

double top_singular_value(const std::vector<double>& m, int rows, int cols) {
  if (rows == 0 || cols == 0) return 0.0;
  const auto s = singular_values(m, rows, cols);
  return s.empty() ? 0.0 : s.front();
}

// (I - û ûᵀ) M with û = row_scale / |row_scale|: removes the weighted mean
// of Hf over the interval from every row.
std::vector<double> centered(const DiscreteOperator& op) {
  const auto& u = op.row_scale;
  const std::size_t nx = u.size(), ny = op.y.size();
  double W = 0.0;
  for (double t : u) W += t * t;
  if (W == 0.0) throw ZeroMassError(kModule, "w vanishes on the interval, H_I is undefined");
  std::vector<double> mean(ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) mean[j] += u[i] * op.matrix[i * ny + j];
  for (double& t : mean) t /= W;
  std::vector<double> out(op.matrix);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] -= u[i] * mean[j];
  return out;
}

// Rows and columns selected by predicates, copied out as a dense block.
template <class RowPred, class ColPred>
double restricted_norm(const DiscreteOperator& op, RowPred row_ok, ColPred col_ok) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < op.x.size(); ++i)
    if (row_ok(op.x[i])) rows.push_back(i);
  for (std::size_t j = 0; j < op.y.size(); ++j)
    if (col_ok(op.y[j])) cols.push_back(j);
  std::vector<double> m(rows.size() * cols.size());
  const std::size_t ny = op.y.size();
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t q = 0; q < cols.size(); ++q) m[r * cols.size() + q] = op.matrix[rows[r] * ny + cols[q]];
  return top_singular_value(m, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
}

}  // namespace

KappaEvaluator::KappaEvaluator(const core::Problem& problem, KOptions opt)
    : problem_(problem), opt_(opt) {}

double KappaEvaluator::kappa(double d, double e) const {
  if (!(e > d && d > 0.0)) throw DomainError(kModule, "𝒦 needs 0 < d < e");
  const auto op = local_operator(problem_, d, e, opt_.res);
  return top_singular_value(centered(op), op.rows(), op.cols());
}

KEstimate KappaEvaluator::estimate(double d, double e) const {
  if (!(e > d && d > 0.0)) throw DomainError(kModule, "𝒦 needs 0 < d < e");
  const auto& pr = problem_;
  KEstimate k;
  k.d = d;
  k.e = e;
  k.c = median_point(pr, d, e);
  const double c = k.c;
  const double ac = pr.a(c), bc = pr.b(c);
  const auto op = local_operator(pr, d, e, opt_.res, {c}, {ac, bc});
  k.kappa = top_singular_value(centered(op), op.rows(), op.cols());

  k.lower_a = restricted_norm(op, [&](double x) { return x < c; }, [&](double y) { return y <= ac; });
  k.lower_b = restricted_norm(op, [&](double x) { return x > c; }, [&](double y) { return y >= bc; });
  k.lower = 0.25 * (k.lower_a + k.lower_b);

  // H̄ f(x) = ∫_{a(d)}^{a(x)} fv + ∫_{b(x)}^{b(e)} fv: the complement of the
  // indicator inside the y-range of the interval.
  const std::size_t nx = op.x.size(), ny = op.y.size();
  std::vector<double> bar(nx * ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    const auto jb = static_cast<std::size_t>(op.col_begin[i]);
    const auto je = static_cast<std::size_t>(op.col_end[i]);
    for (std::size_t j = 0; j < ny; ++j)
      if (j < jb || j >= je) bar[i * ny + j] = op.row_scale[i] * op.col_scale[j];
  }
  k.upper = 2.0 * top_singular_value(bar, op.rows(), op.cols());

  k.viewless_lo = std::max(d, pr.b_inv(ac));
  k.viewless_hi = std::min(e, pr.a_inv(bc));
  if (!(k.viewless_hi > k.viewless_lo)) k.viewless_lo = k.viewless_hi = c;
  return k;
}

EpsPartition epsilon_partition(const KappaEvaluator& kappa, double eps, double t_lo, double t_hi,
                               const PartitionOptions& opt) {
  if (!(eps > 0.0)) throw DomainError(kModule, "ε must be positive");
  if (!(t_lo > 0.0 && t_hi > t_lo)) throw DomainError(kModule, "partition window must satisfy 0 < t_lo < t_hi");
  EpsPartition out;
  out.eps = eps;
  auto K = [&](double d, double e) {
    ++out.evaluations;
    try {
      return kappa.kappa(d, e);
    } catch (const ZeroMassError&) {
      return 0.0;  // w ≡ 0 on the interval: nothing oscillates
    }
  };
  auto& part = out.part;
  part.c.push_back(t_lo);
  double c = t_lo;
  for (;;) {
    const double k_all = K(c, t_hi);
    if (k_all <= eps) {
      part.c.push_back(t_hi);
      part.kappa.push_back(k_all);
      break;
    }
    if (static_cast<int>(part.intervals()) + 1 >= opt.max_intervals)
      throw BudgetError(kModule, "ε-partition needs more than " + std::to_string(opt.max_intervals) + " intervals");
    // bracket in s = log e by doubling the step from c
    const double L = std::log(t_hi / c);
    double s_lo = 0.0, g_lo = -eps;
    double h = opt.first_step * L;
    double s_hi = 0.0, g_hi = 0.0;
    double prev = 0.0;
    for (;;) {
      const double s = std::min(h, L);
      const double kv = s >= L ? k_all : K(c, c * std::exp(s));
      if (kv < prev * (1.0 - 1e-9)) out.non_monotone = true;
      prev = kv;
      if (kv >= eps) {
        s_hi = s;
        g_hi = kv - eps;
        break;
      }
      s_lo = s;
      g_lo = kv - eps;
      h *= 2.0;
    }
    // Illinois on g(s) = 𝒦(c, c e^s) - ε, with a bisection step whenever
    // the bracket fails to halve
    double best_s = s_hi, best_g = g_hi;
    int side = 0;
    double width = s_hi - s_lo;
    for (int it = 0; it < 200; ++it) {
      if (std::abs(best_g) <= opt.rel_tol * eps) break;
      if (s_hi - s_lo <= 1e-15 * std::max(1.0, std::abs(s_hi))) break;
      double s = (s_lo * g_hi - s_hi * g_lo) / (g_hi - g_lo);
      if (it % 3 == 2) {
        if (s_hi - s_lo > 0.5 * width) s = 0.5 * (s_lo + s_hi);
        width = s_hi - s_lo;
      }
      if (!(s > s_lo && s < s_hi)) s = 0.5 * (s_lo + s_hi);
      const double g = K(c, c * std::exp(s)) - eps;
      if (std::abs(g) < std::abs(best_g)) {
        best_s = s;
        best_g = g;
      }
      if (g < 0.0) {
        s_lo = s;
        g_lo = g;
        if (side == -1) g_hi *= 0.5;
        side = -1;
      } else {
        s_hi = s;
        g_hi = g;
        if (side == 1) g_lo *= 0.5;
        side = 1;
      }
    }
    const double next = c * std::exp(best_s);
    if (!(next > c)) throw NonTerminationError(kModule, "ε-partition stalled at c = " + std::to_string(c));
    part.c.push_back(next);
    part.kappa.push_back(best_g + eps);
    c = next;
    if (c >= t_hi) break;
  }
  classify_intervals(part, kappa.problem(), t_lo);
  classify_intervals(part, kappa.problem(), first_type2_anchor(part));
  return out;
}

}  // namespace hslab::lab
