#pragma once

#include <string>
#include <vector>

#include "hslab/core/problem.hpp"
#include "hslab/fairway.hpp"

namespace hslab {

// ξ_k = (a^{-1}∘b)^k(anchor) for the cells [ξ_k, ξ_{k+1}) meeting a window.
struct XiSequence {
  double anchor = 1.0;
  int k_min = 0;
  std::vector<double> xi;  // xi[i] = ξ_{k_min + i}; one more entry than cells

  int cells() const { return static_cast<int>(xi.size()) - 1; }
  int k_max() const { return k_min + cells() - 1; }
  double at(int k) const { return xi.at(static_cast<std::size_t>(k - k_min)); }
};

// Throws WindowExhaustedError if the iteration leaves (0, inf) numerically.
XiSequence xi_sequence(const core::Problem& problem, double t_lo, double t_hi,
                       double anchor = 1.0);

// Points x_{-j_a} = ξ_k < ... < x_0 < ... < x_{j_b} = ξ_{k+1} of one cell.
struct CellRefinement {
  int k = 0;
  std::vector<double> x;
  int j_a = 1;
  int j_b = 1;
  // σ^{-1} undefined on the cell (no v-mass there): x = {ξ_k, ξ_{k+1}}, j_a = 0.
  bool degenerate = false;

  double xi_lo() const { return x.front(); }
  double xi_hi() const { return x.back(); }
  double x0() const { return x[static_cast<std::size_t>(j_a)]; }
  // x_j for -j_a <= j <= j_b.
  double point(int j) const { return x.at(static_cast<std::size_t>(j + j_a)); }
};

// Forward steps x -> σ^{-1}(b(x)) and backward steps x -> σ^{-1}(a(x)) from
// x_0 = σ^{-1}(b(ξ_k)) until the cell ends are reached. A step counts as
// reaching an end when it lands within `reach_tol` (relative) of it.
CellRefinement x_refinement(const FairwayMap& fairway, int k, double xi_lo, double xi_hi,
                            double reach_tol = 1e-9, int step_cap = 10000);

class GridSystem {
 public:
  static GridSystem build(const FairwayMap& fairway, double t_lo, double t_hi,
                          double anchor = 1.0, bool parallel = true);

  const XiSequence& xi() const { return xi_; }
  const std::vector<CellRefinement>& cells() const { return cells_; }
  const CellRefinement& cell(int k) const { return cells_.at(static_cast<std::size_t>(k - xi_.k_min)); }

  double window_lo() const { return t_lo_; }
  double window_hi() const { return t_hi_; }
  // The window snapped outward to whole cells.
  double lo() const { return xi_.xi.front(); }
  double hi() const { return xi_.xi.back(); }

  // μ cells [x_m, x_{m+1}] flattened lexicographically in (k, j).
  struct MuCell {
    int m, k, j;
    double lo, hi;
  };
  std::vector<MuCell> mu_cells() const;

 private:
  XiSequence xi_;
  std::vector<CellRefinement> cells_;
  double t_lo_ = 0.0, t_hi_ = 0.0;
};

// c in (d, e) with ∫_d^c w^p = ½ ∫_d^e w^p. ZeroMassError if ∫_d^e w^p = 0.
double median_point(const core::Problem& problem, double d, double e);

enum class IntervalClass { I1, I21, I22 };
std::string to_string(IntervalClass c);

struct Partition {
  std::vector<double> c;             // c_0 < c_1 < ... < c_M
  std::vector<IntervalClass> cls;    // one per interval (c_n, c_{n+1})
  std::vector<double> kappa;         // optional per-interval 𝒦 values
  std::size_t intervals() const { return c.empty() ? 0 : c.size() - 1; }
};

// Tags each interval: I1 if b(c_n) <= a(c_{n+1}); otherwise I21 when it meets
// two neighbouring segments Δ_k of the chain through `anchor` with positive
// measure (overlap > 1e-12 of the interval length), else I22.
void classify_intervals(Partition& partition, const core::Problem& problem, double anchor = 1.0);

// Left end of the first interval that is not of class I1, or c_0 when there
// is none. The Lemma-Key bookkeeping anchors its segments there.
double first_type2_anchor(const Partition& partition);

}  // namespace hslab
