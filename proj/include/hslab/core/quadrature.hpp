#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace hslab::core {

struct Tolerances {
  double inv = 1e-12;   // relative, monotone inversion
  double quad = 1e-10;  // relative, adaptive quadrature
  double fair = 1e-9;   // relative, fairway balance
  int depth_cap = 60;   // bisection depth before declaring divergence
};

// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Rule gauss_legendre(int n);

// Nodes and weights of a composite rule: `order`-point Gauss-Legendre in
// log-coordinates on every panel [breaks[i], breaks[i+1]]. Breaks must be
// positive and nondecreasing; zero-length panels are skipped.
struct NodeSet {
  std::vector<double> x;
  std::vector<double> weight;
  std::size_t size() const { return x.size(); }
};

NodeSet log_gauss_panels(std::span<const double> breaks, int order);

using Integrand = std::function<double(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [t1, t2].
// Interior breakpoints split the range before adaptation starts.
// Throws DivergentIntegralError when an interval needs more than
// `depth_cap` bisections or the integrand produces non-finite values.
double integrate(const Integrand& f, double t1, double t2, double rel_tol,
                 std::span<const double> breakpoints = {}, int depth_cap = 60);

// ∫_{t1}^{t2} u(y)^r dy for nonnegative u.
double integrate_power(const Integrand& u, double r, double t1, double t2,
                       double rel_tol = 1e-10,
                       std::span<const double> breakpoints = {},
                       int depth_cap = 60);

// Antiderivative of u^r tabulated on a log-spaced grid over [lo, hi].
// Queries that straddle grid nodes reuse cached cell masses; the partial
// cells at either end (and anything outside [lo, hi]) go to quadrature.
class CumulativeIntegral {
 public:
  CumulativeIntegral(Integrand u, double r, double lo, double hi,
                     int cells, double rel_tol,
                     std::vector<double> breakpoints = {});

  double between(double t1, double t2) const;
  // ∫_{lo}^{t} u^r, the cached antiderivative referenced at lo.
  double from_reference(double t) const { return between(lo_, t); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double direct(double t1, double t2) const;

  Integrand u_;
  double r_;
  double lo_, hi_;
  double rel_tol_;
  std::vector<double> breakpoints_;
  std::vector<double> grid_;
  std::vector<long double> prefix_;
};

}  // namespace hslab::core
