#include "hslab/grids.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "hslab/core/monotone.hpp"
#include "hslab/errors.hpp"
#include "hslab/parallel.hpp"

namespace hslab {

namespace {
constexpr const char* kModule = "grids";
constexpr int kXiStepCap = 100000;

void check_step(double from, double to, bool forward) {
  const bool ok = std::isfinite(to) && to > 0.0 && (forward ? to > from : to < from);
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << (forward ? "forward" : "backward") << " step from " << from << " gave " << to;
    throw WindowExhaustedError(kModule, os.str());
  }
}
}  // namespace

XiSequence xi_sequence(const core::Problem& problem, double t_lo, double t_hi, double anchor) {
  if (!(t_lo > 0.0 && t_hi > t_lo && std::isfinite(t_hi)))
    throw DomainError(kModule, "window must satisfy 0 < t_lo < t_hi < inf");
  if (!(anchor > 0.0)) throw DomainError(kModule, "anchor must be positive");
  std::deque<double> xs{anchor};
  int k_min = 0;
  int steps = 0;
  while (xs.back() < t_hi) {
    const double x = xs.back();
    const double next = problem.a_inv(problem.b(x));
    check_step(x, next, true);
    xs.push_back(next);
    if (++steps > kXiStepCap) throw WindowExhaustedError(kModule, "too many forward steps");
  }
  while (xs.front() > t_lo) {
    const double x = xs.front();
    const double prev = problem.b_inv(problem.a(x));
    check_step(x, prev, false);
    xs.push_front(prev);
    --k_min;
    if (++steps > kXiStepCap) throw WindowExhaustedError(kModule, "too many backward steps");
  }
  // keep cells [ξ_k, ξ_{k+1}) meeting [t_lo, t_hi]
  std::size_t first = 0;
  while (first + 1 < xs.size() && xs[first + 1] <= t_lo) ++first;
  std::size_t last = xs.size() - 1;
  while (last > first + 1 && xs[last - 1] >= t_hi) --last;
  XiSequence seq;
  seq.anchor = anchor;
  seq.k_min = k_min + static_cast<int>(first);
  seq.xi.assign(xs.begin() + static_cast<std::ptrdiff_t>(first),
                xs.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return seq;
}

CellRefinement x_refinement(const FairwayMap& fairway, int k, double xi_lo, double xi_hi,
                            double reach_tol, int step_cap) {
  const auto& pr = fairway.problem();
  CellRefinement cell;
  cell.k = k;
  double x0;
  try {
    x0 = fairway.sigma_inverse(pr.b(xi_lo));
  } catch (const ZeroMassError&) {
    cell.x = {xi_lo, xi_hi};
    cell.j_a = 0;
    cell.j_b = 1;
    cell.degenerate = true;
    return cell;
  }
  std::vector<double> fwd, bwd;
  double x = x0;
  for (int step = 0;; ++step) {
    if (step >= step_cap)
      throw NonTerminationError(kModule, "forward refinement did not reach ξ_{k+1} in cell " +
                                             std::to_string(k));
    const double next = fairway.sigma_inverse(pr.b(x));
    if (!(next > x)) throw NonTerminationError(kModule, "forward refinement stalled in cell " + std::to_string(k));
    if (next >= xi_hi * (1.0 - reach_tol)) break;
    fwd.push_back(next);
    x = next;
  }
  x = x0;
  for (int step = 0;; ++step) {
    if (step >= step_cap)
      throw NonTerminationError(kModule, "backward refinement did not reach ξ_k in cell " +
                                             std::to_string(k));
    const double prev = fairway.sigma_inverse(pr.a(x));
    if (!(prev < x)) throw NonTerminationError(kModule, "backward refinement stalled in cell " + std::to_string(k));
    if (prev <= xi_lo * (1.0 + reach_tol)) break;
    bwd.push_back(prev);
    x = prev;
  }
  cell.x.reserve(fwd.size() + bwd.size() + 3);
  cell.x.push_back(xi_lo);
  cell.x.insert(cell.x.end(), bwd.rbegin(), bwd.rend());
  cell.x.push_back(x0);
  cell.x.insert(cell.x.end(), fwd.begin(), fwd.end());
  cell.x.push_back(xi_hi);
  cell.j_a = static_cast<int>(bwd.size()) + 1;
  cell.j_b = static_cast<int>(fwd.size()) + 1;
  return cell;
}

GridSystem GridSystem::build(const FairwayMap& fairway, double t_lo, double t_hi, double anchor,
                             bool parallel) {
  GridSystem g;
  g.t_lo_ = t_lo;
  g.t_hi_ = t_hi;
  g.xi_ = xi_sequence(fairway.problem(), t_lo, t_hi, anchor);
  const int n = g.xi_.cells();
  g.cells_.resize(static_cast<std::size_t>(n));
  parallel_for(
      n,
      [&](std::ptrdiff_t i) {
        const int k = g.xi_.k_min + static_cast<int>(i);
        g.cells_[static_cast<std::size_t>(i)] =
            x_refinement(fairway, k, g.xi_.xi[static_cast<std::size_t>(i)],
                         g.xi_.xi[static_cast<std::size_t>(i) + 1]);
      },
      parallel);
  return g;
}

std::vector<GridSystem::MuCell> GridSystem::mu_cells() const {
  std::vector<MuCell> out;
  int m = 0;
  for (const auto& cell : cells_) {
    for (int j = -cell.j_a; j < cell.j_b; ++j) {
      out.push_back({m++, cell.k, j, cell.point(j), cell.point(j + 1)});
    }
  }
  return out;
}

double median_point(const core::Problem& problem, double d, double e) {
  if (!(e > d)) throw DomainError(kModule, "median_point needs d < e");
  const double total = problem.w_mass(d, e);
  if (!std::isfinite(total)) throw DivergentIntegralError(kModule, "infinite w-mass on interval");
  if (total == 0.0) throw ZeroMassError(kModule, "zero w^p mass on interval");
  return core::invert_monotone([&](double c) { return problem.w_mass(d, c); }, 0.5 * total, d, e,
                               problem.tol().quad);
}

std::string to_string(IntervalClass c) {
  switch (c) {
    case IntervalClass::I1:
      return "I1";
    case IntervalClass::I21:
      return "I21";
    case IntervalClass::I22:
      return "I22";
  }
  return "?";
}

void classify_intervals(Partition& partition, const core::Problem& problem, double anchor) {
  const auto& c = partition.c;
  partition.cls.assign(partition.intervals(), IntervalClass::I1);
  if (partition.intervals() == 0) return;
  const XiSequence chain = xi_sequence(problem, c.front(), c.back(), anchor);
  for (std::size_t n = 0; n + 1 < c.size(); ++n) {
    const double lo = c[n], hi = c[n + 1];
    if (problem.b(lo) <= problem.a(hi)) {
      partition.cls[n] = IntervalClass::I1;
      continue;
    }
    const double margin = 1e-12 * (hi - lo);
    const bool straddles = std::any_of(chain.xi.begin(), chain.xi.end(), [&](double xi) {
      return xi > lo + margin && xi < hi - margin;
    });
    partition.cls[n] = straddles ? IntervalClass::I21 : IntervalClass::I22;
  }
}

double first_type2_anchor(const Partition& partition) {
  for (std::size_t n = 0; n < partition.cls.size(); ++n)
    if (partition.cls[n] != IntervalClass::I1) return partition.c[n];
  return partition.c.empty() ? 1.0 : partition.c.front();
}

}  // namespace hslab
