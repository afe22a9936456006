#pragma once

#include <vector>

#include "hslab/core/problem.hpp"

namespace hslab {

// The fairway σ(t) splits [a(t), b(t)] into two halves of equal v^{p'} mass:
//   ∫_{a(t)}^{σ(t)} v^{p'} = ∫_{σ(t)}^{b(t)} v^{p'}.
class FairwayMap {
 public:
  enum class Mode {
    Auto,     // closed-form scaling when the family allows it
    Numeric,  // always invert the balance equation
  };

  explicit FairwayMap(core::Problem problem, Mode mode = Mode::Auto);

  double sigma(double t) const;
  // t with σ(t) = y, searched on [b^{-1}(y), a^{-1}(y)].
  double sigma_inverse(double y) const;

  // |left - right| / total at t.
  double balance_residual(double t) const;
  // Same for σ^{-1}: the balance at the pair (σ^{-1}(y), y).
  double inverse_balance_residual(double y) const;

  // True when σ(t) = c t^γ is used (power or linear boundaries, pure-power v).
  bool scaling_form() const { return scaling_; }
  double scaling_coef() const { return coef_; }

  struct Sample {
    double t, sigma, residual;
  };
  std::vector<Sample> tabulate(double lo, double hi, int n) const;
  // Number of sampled pairs t_i < t_{i+1} with σ(t_i) >= σ(t_{i+1}).
  int monotonicity_violations(double lo, double hi, int n) const;

  const core::Problem& problem() const { return problem_; }

 private:
  double sigma_numeric(double t) const;
  double sigma_inverse_numeric(double y) const;

  core::Problem problem_;
  bool scaling_ = false;
  double coef_ = 0.0;
  double gamma_ = 1.0;
};

}  // namespace hslab
