#pragma once

#include <limits>
#include <memory>
#include <string>

#include "hslab/core/quadrature.hpp"

namespace hslab::core {

// Nonnegative weight u(x) = c * x^beta * exp(-lambda x) on [lo, hi], zero
// outside. Covers constants, pure powers, decaying powers and cut-offs.
class Weight {
 public:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  Weight() = default;
  Weight(double coef, double exponent, double decay = 0.0, double lo = 0.0, double hi = kInf);

  static Weight zero() { return Weight(0.0, 0.0); }
  static Weight constant(double c) { return Weight(c, 0.0); }
  static Weight power(double beta, double c = 1.0) { return Weight(c, beta); }

  Weight scaled(double factor) const;

  double operator()(double x) const;
  // u(x)^r, evaluated without forming u first.
  double pow(double x, double r) const;

  // ∫_{t1}^{t2} u^r. Closed form when there is no exponential factor,
  // adaptive quadrature otherwise (or the attached cache when r matches).
  // Throws DivergentIntegralError for non-integrable endpoint singularities.
  double mass(double r, double t1, double t2, double rel_tol = 1e-10) const;

  // Attaches a cumulative table of u^r over [lo, hi]. Only used by mass()
  // when the weight has an exponential factor.
  void attach_cache(double r, double lo, double hi, int cells, double rel_tol = 1e-10);

  double coef() const { return coef_; }
  double exponent() const { return exponent_; }
  double decay() const { return decay_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }

  bool is_zero() const { return coef_ == 0.0 || !(hi_ > lo_); }
  bool has_full_support() const { return lo_ == 0.0 && hi_ == kInf; }
  // c * x^beta on the whole half-line.
  bool is_pure_power() const { return decay_ == 0.0 && has_full_support(); }
  bool is_constant() const { return is_pure_power() && exponent_ == 0.0; }

  std::string describe() const;

 private:
  double closed_form(double r, double t1, double t2) const;

  double coef_ = 0.0;
  double exponent_ = 0.0;
  double decay_ = 0.0;
  double lo_ = 0.0;
  double hi_ = kInf;
  double cache_r_ = 0.0;
  std::shared_ptr<const CumulativeIntegral> cache_;
};

}  // namespace hslab::core
