#include "hslab/core/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "hslab/errors.hpp"

namespace hslab::core {

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

NodeSet log_gauss_panels(std::span<const double> breaks, int order) {
  const Rule rule = gauss_legendre(order);
  NodeSet out;
  if (breaks.size() < 2) return out;
  out.x.reserve((breaks.size() - 1) * order);
  out.weight.reserve((breaks.size() - 1) * order);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    if (!(hi > lo)) continue;
    if (!(lo > 0.0)) throw std::invalid_argument("log_gauss_panels: breaks must be positive");
    const double ulo = std::log(lo);
    const double half = 0.5 * std::log1p((hi - lo) / lo);
    const double mid = ulo + half;
    for (int q = 0; q < order; ++q) {
      double x = std::exp(mid + half * rule.nodes[q]);
      x = std::clamp(x, lo, hi);
      out.x.push_back(x);
      out.weight.push_back(half * rule.weights[q] * x);
    }
  }
  return out;
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double result, error;
  bool roundoff_limited;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const Integrand& f, double a, double b, int depth) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx), f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx), f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * eps * resabs;
  bool limited = false;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps) && err <= floor) {
    err = floor;
    limited = true;
  }
  if (!std::isfinite(result) || !std::isfinite(err)) {
    throw DivergentIntegralError("function-core",
                                 "non-finite integrand on [" + std::to_string(a) +
                                     ", " + std::to_string(b) + "]");
  }
  return {a, b, result, err, limited, depth};
}

double adaptive_gk(const Integrand& f, double t1, double t2, double rel_tol,
                   std::span<const double> breakpoints, int depth_cap) {
  std::vector<double> cuts{t1};
  for (double c : breakpoints)
    if (c > t1 && c < t2) cuts.push_back(c);
  cuts.push_back(t2);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  long double total = 0.0L, total_err = 0.0L;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = kronrod15(f, cuts[i], cuts[i + 1], 0);
    total += s.result;
    total_err += s.error;
    heap.push(s);
  }

  constexpr std::size_t kMaxSegments = 50000;
  constexpr double kTiny = std::numeric_limits<double>::min();
  while (total_err > std::max<long double>(rel_tol * std::abs(total), kTiny)) {
    Segment worst = heap.top();
    if (worst.roundoff_limited) break;
    if (worst.depth >= depth_cap) {
      throw DivergentIntegralError(
          "function-core", "adaptive refinement exceeded depth " +
                               std::to_string(depth_cap) + " near [" +
                               std::to_string(worst.a) + ", " + std::to_string(worst.b) + "]");
    }
    if (heap.size() >= kMaxSegments) {
      throw DivergentIntegralError("function-core", "segment budget exhausted");
    }
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // interval at floating-point resolution; nothing left to split
      heap.push(worst);
      break;
    }
    Segment left = kronrod15(f, worst.a, mid, worst.depth + 1);
    Segment right = kronrod15(f, mid, worst.b, worst.depth + 1);
    total += (left.result + right.result) - worst.result;
    total_err += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // final sum in fixed (left-to-right) order for reproducibility
  std::vector<Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  long double sum = 0.0L;
  for (const auto& s : segs) sum += s.result;
  return static_cast<double>(sum);
}

// ∫_0^{t2} f as a sum over dyadic pieces [t2 2^{-j-1}, t2 2^{-j}], i.e.
// bisection toward the singular end. Near 0 the weights behave like powers,
// so successive pieces form a geometric series whose ratio closes the tail.
double integrate_from_zero(const Integrand& f, double t2, double rel_tol,
                           std::span<const double> breakpoints, int depth_cap) {
  long double sum = 0.0L;
  double prev = 0.0, prev_ratio = -1.0;
  double hi = t2;
  for (int j = 0; j < depth_cap; ++j) {
    const double lo = 0.5 * hi;
    const double piece = adaptive_gk(f, lo, hi, rel_tol, breakpoints, depth_cap);
    sum += piece;
    hi = lo;
    if (j == 0) {
      prev = piece;
      continue;
    }
    if (piece == 0.0 && prev == 0.0 && j >= 30) return static_cast<double>(sum);
    const double ratio = prev > 0.0 ? piece / prev : (piece == 0.0 ? 0.0 : 2.0);
    const bool stable = prev_ratio >= 0.0 && std::abs(ratio - prev_ratio) <= 1e-3 * ratio + 1e-12;
    if (piece > 0.0 && ratio < 1.0 && stable) {
      const double tail = piece * ratio / (1.0 - ratio);
      if (tail <= rel_tol * static_cast<double>(sum) || j == depth_cap - 1)
        return static_cast<double>(sum + tail);
    }
    prev = piece;
    prev_ratio = ratio;
  }
  throw DivergentIntegralError("function-core",
                               "no convergent tail after " + std::to_string(depth_cap) +
                                   " bisections toward 0 (ratio " + std::to_string(prev_ratio) +
                                   ")");
}

}  // namespace

double integrate(const Integrand& f, double t1, double t2, double rel_tol,
                 std::span<const double> breakpoints, int depth_cap) {
  if (t1 == t2) return 0.0;
  if (t2 < t1) return -integrate(f, t2, t1, rel_tol, breakpoints, depth_cap);
  if (t1 == 0.0 && t2 > 0.0) return integrate_from_zero(f, t2, rel_tol, breakpoints, depth_cap);
  if (t1 > 0.0 && t2 / t1 > 1e4) {
    // wide positive range: power-law behaviour is smooth in log coordinates
    std::vector<double> log_breaks;
    for (double c : breakpoints)
      if (c > t1 && c < t2) log_breaks.push_back(std::log(c));
    const Integrand g = [&f](double u) {
      const double x = std::exp(u);
      return f(x) * x;
    };
    return adaptive_gk(g, std::log(t1), std::log(t2), rel_tol, log_breaks, depth_cap);
  }
  return adaptive_gk(f, t1, t2, rel_tol, breakpoints, depth_cap);
}

double integrate_power(const Integrand& u, double r, double t1, double t2, double rel_tol,
                       std::span<const double> breakpoints, int depth_cap) {
  if (t1 == t2) return 0.0;
  const Integrand g = [&u, r](double y) {
    const double val = u(y);
    if (val <= 0.0) return 0.0;
    return r == 1.0 ? val : std::pow(val, r);
  };
  return integrate(g, t1, t2, rel_tol, breakpoints, depth_cap);
}

CumulativeIntegral::CumulativeIntegral(Integrand u, double r, double lo, double hi, int cells,
                                       double rel_tol, std::vector<double> breakpoints)
    : u_(std::move(u)),
      r_(r),
      lo_(lo),
      hi_(hi),
      rel_tol_(rel_tol),
      breakpoints_(std::move(breakpoints)) {
  if (!(lo > 0.0 && hi > lo) || cells < 1)
    throw std::invalid_argument("CumulativeIntegral: need 0 < lo < hi and cells >= 1");
  std::sort(breakpoints_.begin(), breakpoints_.end());
  grid_.resize(cells + 1);
  const double span = std::log(hi / lo);
  for (int i = 0; i <= cells; ++i) grid_[i] = lo * std::exp(span * i / cells);
  grid_.front() = lo;
  grid_.back() = hi;
  prefix_.assign(cells + 1, 0.0L);
  for (int i = 0; i < cells; ++i) prefix_[i + 1] = prefix_[i] + direct(grid_[i], grid_[i + 1]);
}

double CumulativeIntegral::direct(double t1, double t2) const {
  if (!(t2 > t1)) return 0.0;
  return integrate_power(u_, r_, t1, t2, rel_tol_, breakpoints_);
}

double CumulativeIntegral::between(double t1, double t2) const {
  if (t2 < t1) return -between(t2, t1);
  if (t1 == t2) return 0.0;
  if (t1 < lo_ || t2 > hi_) return direct(t1, t2);
  const auto first = std::lower_bound(grid_.begin(), grid_.end(), t1);
  const auto last = std::upper_bound(grid_.begin(), grid_.end(), t2);
  if (first == grid_.end() || last == grid_.begin()) return direct(t1, t2);
  const std::size_t i1 = static_cast<std::size_t>(first - grid_.begin());
  const std::size_t i2 = static_cast<std::size_t>(last - grid_.begin()) - 1;
  if (i1 > i2) return direct(t1, t2);
  const long double inner = prefix_[i2] - prefix_[i1];
  return static_cast<double>(direct(t1, grid_[i1]) + inner + direct(grid_[i2], t2));
}

}  // namespace hslab::core
