#pragma once

#include <limits>
#include <span>
#include <vector>

#include "hslab/fairway.hpp"
#include "hslab/grids.hpp"

namespace hslab {

struct NuOptions {
  int samples = 256;       // log-spaced samples of t per cell
  int golden_iters = 60;   // golden-section polish around the best sample
};

struct NuValues {
  int k = 0;
  double xi_lo = 0.0, xi_hi = 0.0;
  double nu_tilde = 0.0, nu_bar = 0.0, nu = 0.0;
  double argmax_bar = 0.0, argmax = 0.0;
  // best sample minus second best: a size for what the sampling may miss
  double gap_bar = 0.0, gap = 0.0;
};

struct MuValue {
  int m = 0, k = 0, j = 0;
  double lo = 0.0, hi = 0.0;
  double value = 0.0;
};

struct HolderCheck {
  double lhs = 0.0;  // Σ_i W(I_i)^{1/p} (V[a(c_i),a(c_{i+1})] + V[b(c_i),b(c_{i+1})])^{1/p'}
  double rhs = 0.0;  // μ_m
  bool holds = true;
};

struct ScalarFunctional {
  double alpha = 0.0;
  double power = 0.0;  // the functional raised to α
  double root = 0.0;   // the functional itself
};

struct SchattenSum {
  double power_sum = 0.0;  // Σ s_n^α
  double norm = 0.0;       // (Σ s_n^α)^{1/α}
  bool overflow = false;
};

// (Σ s_n^α)^{1/α} with compensated summation. overflow is set (and the
// value is +inf) when the partial sums leave the finite range.
SchattenSum schatten_sum(std::span<const double> s, double alpha);

struct TailEstimate {
  double lower = 0.0;        // estimated Σ ν̃_k^α over cells below the window
  double upper = 0.0;        // and above it
  double relative = 0.0;     // (lower + upper) / in-window sum
  bool certified = false;    // both tails decay geometrically and relative < tol
};

// Functionals of one problem on the window of a grid. Weight masses in x are
// clipped to the snapped window [X_lo, X_hi], so that every quantity refers
// to the operator truncated to that window.
class Functionals {
 public:
  Functionals(const FairwayMap& fairway, const GridSystem& grid, bool clip_to_window = true);

  NuValues nu_variants(const CellRefinement& cell, const NuOptions& opt = {}) const;
  std::vector<NuValues> nu_all(const NuOptions& opt = {}, bool parallel = true) const;

  double mu(double x_lo, double x_hi) const;
  std::vector<MuValue> mu_all(bool parallel = true) const;

  HolderCheck holder_subdivision_check(double x_lo, double x_hi, std::span<const double> cuts,
                                       double tol = 1e-8) const;

  ScalarFunctional functional_V(double alpha, bool parallel = true) const;
  ScalarFunctional functional_W(double alpha, bool parallel = true) const;

  // The Example functional for a(x) = Ax, b(x) = Bx and v ≡ 1, integrated over
  // the single cell [ξ_k, ξ_{k+1}] as printed, or summed over all window
  // cells. ConfigError for any other configuration.
  ScalarFunctional example_F_cell(double alpha, int k) const;
  ScalarFunctional example_F_sum(double alpha) const;

  TailEstimate nu_tilde_tail(double alpha, std::span<const NuValues> in_window, int extra_cells = 3,
                             double tail_tol = 1e-6) const;

  // ν̃ for an arbitrary cell index (also outside the window).
  double nu_tilde(double xi_lo, double xi_hi) const;

  double X_lo() const { return x_lo_; }
  double X_hi() const { return x_hi_; }

 private:
  // ∫ w^p over [lo, hi] ∩ window (or unclipped).
  double w_mass_clipped(double lo, double hi) const;
  double f_integrand_cell(double alpha, double t) const;
  void require_example_family() const;

  const FairwayMap& fairway_;
  const GridSystem& grid_;
  const core::Problem& pr_;
  bool clip_;
  double x_lo_, x_hi_;
};

}  // namespace hslab
