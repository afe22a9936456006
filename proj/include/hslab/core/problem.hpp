#pragma once

#include "hslab/core/monotone.hpp"
#include "hslab/core/quadrature.hpp"
#include "hslab/core/weight.hpp"

namespace hslab::core {

// Weights v, w with exponent p and its conjugate.
struct WeightPair {
  Weight v;
  Weight w;
  double p = 2.0;
  double pprime = 2.0;

  WeightPair(Weight v_, Weight w_, double p_);
};

// Boundaries plus weights: everything needed to evaluate the operator
//   Hf(x) = w(x) ∫_{a(x)}^{b(x)} f(y) v(y) dy.
class Problem {
 public:
  Problem(BoundaryPair bounds, WeightPair weights, Tolerances tol = {});

  const BoundaryPair& bounds() const { return bounds_; }
  const WeightPair& weights() const { return weights_; }
  const Weight& v() const { return weights_.v; }
  const Weight& w() const { return weights_.w; }
  double p() const { return weights_.p; }
  double pprime() const { return weights_.pprime; }
  const Tolerances& tol() const { return tol_; }

  double a(double x) const { return bounds_.a(x); }
  double b(double x) const { return bounds_.b(x); }
  double a_inv(double y) const { return bounds_.a_inv(y); }
  double b_inv(double y) const { return bounds_.b_inv(y); }

  // ∫_{t1}^{t2} v^{p'} and ∫_{t1}^{t2} w^p.
  double v_mass(double t1, double t2) const { return weights_.v.mass(pprime(), t1, t2, tol_.quad); }
  double w_mass(double t1, double t2) const { return weights_.w.mass(p(), t1, t2, tol_.quad); }

  // Caches cumulative masses of weights that lack a closed form, for
  // x in [x_lo, x_hi] and y in [a(x_lo), b(x_hi)].
  void prepare_caches(double x_lo, double x_hi, int cells = 512);

 private:
  BoundaryPair bounds_;
  WeightPair weights_;
  Tolerances tol_;
};

}  // namespace hslab::core
