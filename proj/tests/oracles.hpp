#pragma once

// Independent low-tech reference computations used by the tests. Nothing in
// here calls into the library's quadrature or inversion code.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Plain bisection for nondecreasing f, run until the bracket is below tol.
inline double bisect(const std::function<double(double)>& f, double y, double lo, double hi,
                     double tol = 1e-14) {
  for (int i = 0; i < 400 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Composite trapezoid on n log-uniform nodes over [lo, hi].
inline double log_trapezoid(const std::function<double(double)>& f, double lo, double hi,
                            int n = 100000) {
  const double du = std::log(hi / lo) / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo * std::exp(du * i);
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    sum += wgt * f(x) * x;
  }
  return sum * du;
}

// Composite Simpson on n (even) uniform panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int n = 20000) {
  if (n % 2) ++n;
  const double h = (hi - lo) / n;
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + h * i);
  return sum * h / 3.0;
}

// Composite Simpson in log coordinates, for integrands spread over decades.
inline double log_simpson(const std::function<double(double)>& f, double lo, double hi,
                          int n = 20000) {
  return simpson([&](double u) { const double x = std::exp(u); return f(x) * x; },
                 std::log(lo), std::log(hi), n);
}

// Golden-section-free supremum: dense sampling on a log grid.
inline double dense_sup(const std::function<double(double)>& f, double lo, double hi,
                        int n = 20000) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / n);
    best = std::max(best, f(x));
  }
  return best;
}

}  // namespace oracle
