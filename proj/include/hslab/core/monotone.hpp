#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hslab::core {

using ScalarMap = std::function<double(double)>;

// Solve f(x) = y for nondecreasing f on [lo, hi] by Illinois false position
// with a bisection safeguard. Stops when |f(x) - y| <= rel_tol * |y| or the
// bracket collapses to a few ulps, and returns the best point seen.
//   BracketError      y outside [f(lo), f(hi)]
//   NonMonotoneError  f(lo) > f(hi), or a sample leaves [f(lo), f(hi)]
double invert_monotone(const ScalarMap& f, double y, double lo, double hi,
                       double rel_tol = 1e-12);

// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes, as in
// PCHIP) through strictly increasing data. Outside the knots the table
// continues linearly with the end-interval secant slope.
class MonotoneTable {
 public:
  MonotoneTable(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double inverse(double y, double rel_tol = 1e-14) const;

  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  double eval_piece(std::size_t i, double t) const;

  std::vector<double> x_, y_, d_;
};

// Strictly increasing map of the half-line with a(0) = 0.
class MonotoneMap {
 public:
  enum class Kind { Linear, Power, Tabulated };

  static MonotoneMap linear(double coef);
  static MonotoneMap power(double coef, double gamma);
  // Samples (x_i, f(x_i)) with x_i > 0; interpolated in log-log coordinates,
  // so extrapolation is a power law fixed by the end secants.
  static MonotoneMap tabulated(const std::vector<double>& x, const std::vector<double>& fx);

  double operator()(double x) const;
  double inverse(double y) const;

  Kind kind() const { return kind_; }
  double coef() const { return coef_; }
  // 1 for Linear, gamma for Power, 0 for Tabulated.
  double gamma() const { return gamma_; }

 private:
  MonotoneMap() = default;

  Kind kind_ = Kind::Linear;
  double coef_ = 1.0;
  double gamma_ = 1.0;
  std::shared_ptr<const MonotoneTable> table_;  // log x -> log f
};

// Boundary functions a < b of the operator.
class BoundaryPair {
 public:
  enum class Family { Linear, Power, Tabulated };

  static BoundaryPair linear(double A, double B);
  static BoundaryPair power(double A, double B, double gamma);
  static BoundaryPair tabulated(const std::vector<double>& x, const std::vector<double>& a,
                                const std::vector<double>& b);

  double a(double x) const { return a_(x); }
  double b(double x) const { return b_(x); }
  double a_inv(double y) const { return a_.inverse(y); }
  double b_inv(double y) const { return b_.inverse(y); }

  const MonotoneMap& a_map() const { return a_; }
  const MonotoneMap& b_map() const { return b_; }
  Family family() const { return family_; }
  std::string family_name() const;
  // Parameters of the linear and power families (A, B, gamma); 0 otherwise.
  double A() const { return a_.coef(); }
  double B() const { return b_.coef(); }
  double gamma() const { return a_.gamma(); }

  // Checks a < b and strict increase on `samples` log-spaced points in
  // [lo, hi]; throws DomainError naming the first violation.
  void validate(double lo = 1e-8, double hi = 1e8, int samples = 400) const;

 private:
  BoundaryPair(Family f, MonotoneMap a, MonotoneMap b)
      : family_(f), a_(std::move(a)), b_(std::move(b)) {}

  Family family_;
  MonotoneMap a_, b_;
};

}  // namespace hslab::core
