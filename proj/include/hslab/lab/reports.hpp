#pragma once

#include <span>
#include <string>
#include <vector>

#include "hslab/fairway.hpp"
#include "hslab/functionals.hpp"
#include "hslab/grids.hpp"
#include "hslab/lab/discrete.hpp"
#include "hslab/lab/kappa.hpp"

namespace hslab::lab {

// s_n with 1-based n; zero past the end of the computed spectrum.
double s_at(std::span<const double> s, int n);

struct KeyCheck {
  double eps = 0.0;
  int intervals = 0;       // N_total = full + 1
  int full = 0;            // intervals with 𝒦 = ε
  bool non_monotone = false;
  // Key: with 7N full intervals, s_N >= ε/2. N = floor(full / 7); vacuous at N = 0.
  int n_key = 0;
  double key_coarse = 0.0, key_fine = 0.0;
  bool key_applicable = false, key_pass = true;
  // Key2: with N full intervals, s_{N+2} <= sqrt(7) ε.
  int n_key2 = 0;
  double key2_coarse = 0.0, key2_fine = 0.0, key2_bound = 0.0;
  bool key2_pass = true;
};

// Both sides at two resolutions; a check passes only when it holds at both,
// so the refinement error bar cannot straddle the inequality.
KeyCheck lemma_key_checks(const EpsPartition& partition, std::span<const double> s_coarse,
                          std::span<const double> s_fine);

struct RatioRow {
  double alpha = 0.0;
  SchattenSum nu, s, mu;
  double r1 = 0.0;  // (Σν^α)^{1/α} / (Σs^α)^{1/α}
  double r2 = 0.0;  // (Σs^α)^{1/α} / (Σμ^α)^{1/α}
  bool r1_defined = false, r2_defined = false;
  bool finite_together = true;  // all three sums finite, or none of them
};

struct RatioReport {
  std::vector<RatioRow> rows;
  double norm = 0.0;      // s_1
  double sup_nu = 0.0, sup_mu = 0.0;
  double r3 = 0.0;        // ||H|| / sup ν_k
  double r4 = 0.0;        // ||H|| / sup μ_m
  bool r3_defined = false, r4_defined = false;
  // Schatten sums nonincreasing in α for each of ν, s, μ.
  bool monotone_in_alpha = true;
  // The constants β_p, γ_p are reported next to the ratios, never asserted.
  double beta_p = 1.0, gamma_p = 1.0;
};

RatioReport theorem_ratio_report(std::span<const double> alphas, std::span<const NuValues> nu,
                                 std::span<const MuValue> mu, std::span<const double> s,
                                 double beta_p = 1.0, double gamma_p = 1.0);

struct BlockFamily {
  std::string name;  // T1, T2, S1, S2
  std::vector<double> matrix;
  std::vector<double> s;
  std::vector<SchattenSum> sums;  // per requested α
};

struct BlockSplitReport {
  int rows = 0, cols = 0;
  std::vector<BlockFamily> blocks;
  double frobenius_full = 0.0;
  double reconstruction_error = 0.0;  // ||M - Σ blocks||_F / ||M||_F (0 when M = 0)
  long long overclaimed = 0;   // support entries claimed by more than one block
  long long unclaimed = 0;     // support entries claimed by none
  long long stray = 0;         // entries off the support claimed by some block
};

// Per cell k, with x0 = σ^{-1}(b(ξ_k)) and y split at b(ξ_k) = a(ξ_{k+1}):
//   T_{k,1}: x in [x0, ξ_{k+1}], y in [a(x), b(ξ_k)]
//   T_{k,2}: x in [ξ_k, x0],     y in [a(x), b(ξ_k)]
//   S_{k,1}: x in [ξ_k, x0],     y in [b(ξ_k), b(x)]
//   S_{k,2}: x in [x0, ξ_{k+1}], y in [b(ξ_k), b(x)]
// on the snapped window of the grid.
BlockSplitReport block_split_diagnostic(const FairwayMap& fairway, const GridSystem& grid,
                                        const Resolution& res, std::span<const double> alphas = {},
                                        bool with_spectra = true);

struct UnionCheck {
  bool disjoint_columns = true;  // the kept blocks touch disjoint y cells
  double max_abs_diff = 0.0;     // between sorted spectra
  double s1 = 0.0;
  int blocks = 0;
};

// Keeps the rows of every other interval of a partition made of I1
// intervals only and compares the spectrum of the masked operator with the
// union of the spectra of its per-interval blocks.
UnionCheck block_union_check(const core::Problem& problem, std::span<const double> c, int parity,
                             const Resolution& res);

struct ViewlessRow {
  int interval = 0;
  double lo = 0.0, hi = 0.0;          // the zone, clipped to the interval
  std::vector<int> cells_inside;      // k with Δ̄_k ⊆ I_n and ν argmax in the zone
};

// For each partition interval, the cells whose ν_k is attained inside the
// zone that the lower estimate cannot see.
std::vector<ViewlessRow> viewless_report(const core::Problem& problem, const Partition& partition,
                                         std::span<const NuValues> nu);

}  // namespace hslab::lab
