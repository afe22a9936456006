#pragma once

#include <vector>

#include "hslab/core/problem.hpp"
#include "hslab/grids.hpp"
#include "hslab/lab/discrete.hpp"

namespace hslab::lab {

struct KOptions {
  Resolution res{160, 320, 4};  // local discretization of each interval
};

// 𝒦(I) = sup_f ||w (Hf - H_I f)||_{2,I} / ||f||_2 with H_I the w²-weighted
// mean of Hf over I, together with the two-sided estimate around the
// w²-median c of I.
struct KEstimate {
  double d = 0.0, e = 0.0, c = 0.0;
  double kappa = 0.0;
  double lower = 0.0;     // (lower_a + lower_b) / 4
  double upper = 0.0;     // 2 ||f -> w H̄ f||
  double lower_a = 0.0;   // ||w_d H|| over f supported in [a(d), a(c)]
  double lower_b = 0.0;   // ||w_e H|| over f supported in [b(c), b(e)]
  // [b^{-1}(a(c)), a^{-1}(b(c))] clipped to I.
  double viewless_lo = 0.0, viewless_hi = 0.0;
};

class KappaEvaluator {
 public:
  explicit KappaEvaluator(const core::Problem& problem, KOptions opt = {});

  // ZeroMassError if ∫_I w² vanishes.
  double kappa(double d, double e) const;
  KEstimate estimate(double d, double e) const;

  const core::Problem& problem() const { return problem_; }
  const KOptions& options() const { return opt_; }

 private:
  const core::Problem& problem_;
  KOptions opt_;
};

struct PartitionOptions {
  double rel_tol = 1e-6;      // |𝒦(I_n) - ε| <= rel_tol·ε on full intervals
  int max_intervals = 10000;
  double first_step = 1e-3;   // initial bracket, as a fraction of the remaining log-extent
};

struct EpsPartition {
  double eps = 0.0;
  Partition part;  // kappa filled; classes use the chain through the first type-2 end
  // 𝒦(c_n, ·) decreased somewhere during bracketing; the first crossing was taken.
  bool non_monotone = false;
  int evaluations = 0;

  // Intervals with 𝒦 = ε, i.e. all but the last one.
  int full_intervals() const { return static_cast<int>(part.intervals()) - 1; }
};

// Left to right from t_lo: c_{n+1} solves 𝒦(c_n, c_{n+1}) = ε by doubling in
// log e and then Illinois steps, until 𝒦(c_n, t_hi) <= ε. BudgetError past
// max_intervals.
EpsPartition epsilon_partition(const KappaEvaluator& kappa, double eps, double t_lo, double t_hi,
                               const PartitionOptions& opt = {});

}  // namespace hslab::lab
