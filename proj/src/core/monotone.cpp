#include "hslab/core/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hslab/errors.hpp"

namespace hslab::core {

namespace {
constexpr const char* kModule = "function-core";
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

double invert_monotone(const ScalarMap& f, double y, double lo, double hi, double rel_tol) {
  if (!(lo <= hi)) throw BracketError(kModule, "empty bracket");
  double flo = f(lo), fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi) || !std::isfinite(y))
    throw BracketError(kModule, "non-finite value at bracket ends");
  if (flo > fhi) {
    std::ostringstream os;
    os << "f(lo)=" << flo << " > f(hi)=" << fhi;
    throw NonMonotoneError(kModule, os.str());
  }
  const double scale = std::max({std::abs(flo), std::abs(fhi), std::abs(y)});
  const double slack = 64.0 * kEps * scale;
  if (y < flo - slack || y > fhi + slack) {
    std::ostringstream os;
    os.precision(17);
    os << "target " << y << " outside [" << flo << ", " << fhi << "]";
    throw BracketError(kModule, os.str());
  }
  if (y <= flo) return lo;
  if (y >= fhi) return hi;

  const double tol = rel_tol * std::max(std::abs(y), std::numeric_limits<double>::min());
  const double sample_slack = 1e-10 * std::max(scale, std::numeric_limits<double>::min());
  const double f_lo0 = flo, f_hi0 = fhi;
  double glo = flo - y, ghi = fhi - y;  // glo < 0 < ghi
  double best_x = lo, best_r = -glo;
  if (ghi < best_r) {
    best_x = hi;
    best_r = ghi;
  }
  int side = 0;
  double width_prev = hi - lo;
  for (int iter = 0; iter < 500; ++iter) {
    double x = lo - glo * (hi - lo) / (ghi - glo);
    const bool stalled = (iter % 3 == 2) && (hi - lo) > 0.5 * width_prev;
    if (stalled || !(x > lo && x < hi)) x = lo + 0.5 * (hi - lo);
    if (iter % 3 == 2) width_prev = hi - lo;

    const double fx = f(x);
    if (!std::isfinite(fx) || fx < f_lo0 - sample_slack || fx > f_hi0 + sample_slack) {
      std::ostringstream os;
      os.precision(17);
      os << "f(" << x << ")=" << fx << " leaves [" << f_lo0 << ", " << f_hi0 << "]";
      throw NonMonotoneError(kModule, os.str());
    }
    const double g = fx - y;
    if (std::abs(g) < best_r) {
      best_r = std::abs(g);
      best_x = x;
    }
    if (std::abs(g) <= tol) return x;
    if (g < 0.0) {
      lo = x;
      glo = g;
      if (side == -1) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = g;
      if (side == +1) glo *= 0.5;
      side = +1;
    }
    if (hi - lo <= 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return best_x;
}

MonotoneTable::MonotoneTable(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError(kModule, "table needs >= 2 matching samples");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) throw DomainError(kModule, "table abscissae not strictly increasing");
    if (!(y_[i + 1] > y_[i])) throw DomainError(kModule, "table values not strictly increasing");
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  d_.assign(n, 0.0);
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // shape-preserving three-point end slopes
  auto end_slope = [](double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(d) > 3.0 * std::abs(m0)) return 3.0 * m0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneTable::eval_piece(std::size_t i, double t) const {
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneTable::operator()(double t) const {
  const std::size_t n = x_.size();
  if (t <= x_.front()) {
    const double slope = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    return y_[0] + slope * (t - x_[0]);
  }
  if (t >= x_.back()) {
    const double slope = (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
    return y_[n - 1] + slope * (t - x_[n - 1]);
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return eval_piece(i, t);
}

double MonotoneTable::inverse(double y, double rel_tol) const {
  const std::size_t n = x_.size();
  if (y <= y_.front()) {
    const double slope = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    return x_[0] + (y - y_[0]) / slope;
  }
  if (y >= y_.back()) {
    const double slope = (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
    return x_[n - 1] + (y - y_[n - 1]) / slope;
  }
  const auto it = std::upper_bound(y_.begin(), y_.end(), y);
  const std::size_t i = static_cast<std::size_t>(it - y_.begin()) - 1;
  return invert_monotone([this, i](double t) { return eval_piece(i, t); }, y, x_[i], x_[i + 1],
                         rel_tol);
}

MonotoneMap MonotoneMap::linear(double coef) {
  if (!(coef > 0.0) || !std::isfinite(coef))
    throw DomainError(kModule, "linear coefficient must be positive");
  MonotoneMap m;
  m.kind_ = Kind::Linear;
  m.coef_ = coef;
  m.gamma_ = 1.0;
  return m;
}

MonotoneMap MonotoneMap::power(double coef, double gamma) {
  if (!(coef > 0.0) || !std::isfinite(coef))
    throw DomainError(kModule, "power coefficient must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError(kModule, "power exponent must be positive");
  MonotoneMap m;
  m.kind_ = Kind::Power;
  m.coef_ = coef;
  m.gamma_ = gamma;
  return m;
}

MonotoneMap MonotoneMap::tabulated(const std::vector<double>& x, const std::vector<double>& fx) {
  if (x.size() != fx.size() || x.size() < 2)
    throw DomainError(kModule, "tabulated map needs >= 2 matching samples");
  std::vector<double> lx(x.size()), ly(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(fx[i] > 0.0))
      throw DomainError(kModule, "tabulated samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(fx[i]);
  }
  MonotoneMap m;
  m.kind_ = Kind::Tabulated;
  m.coef_ = 0.0;
  m.gamma_ = 0.0;
  m.table_ = std::make_shared<const MonotoneTable>(std::move(lx), std::move(ly));
  return m;
}

double MonotoneMap::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Linear:
      return coef_ * x;
    case Kind::Power:
      return coef_ * std::pow(x, gamma_);
    case Kind::Tabulated:
      return std::exp((*table_)(std::log(x)));
  }
  return 0.0;
}

double MonotoneMap::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Linear:
      return y / coef_;
    case Kind::Power:
      return std::pow(y / coef_, 1.0 / gamma_);
    case Kind::Tabulated:
      return std::exp(table_->inverse(std::log(y)));
  }
  return 0.0;
}

BoundaryPair BoundaryPair::linear(double A, double B) {
  if (!(A > 0.0 && B > 0.0)) throw DomainError(kModule, "A and B must be positive");
  if (!(A < B)) throw DomainError(kModule, "need A < B so that a(x) < b(x)");
  return BoundaryPair(Family::Linear, MonotoneMap::linear(A), MonotoneMap::linear(B));
}

BoundaryPair BoundaryPair::power(double A, double B, double gamma) {
  if (!(A > 0.0 && B > 0.0)) throw DomainError(kModule, "A and B must be positive");
  if (!(A < B)) throw DomainError(kModule, "need A < B so that a(x) < b(x)");
  return BoundaryPair(Family::Power, MonotoneMap::power(A, gamma), MonotoneMap::power(B, gamma));
}

BoundaryPair BoundaryPair::tabulated(const std::vector<double>& x, const std::vector<double>& a,
                                     const std::vector<double>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    if (!(a[i] < b[i])) throw DomainError(kModule, "tabulated boundaries need a < b at every knot");
  BoundaryPair pair(Family::Tabulated, MonotoneMap::tabulated(x, a), MonotoneMap::tabulated(x, b));
  pair.validate();
  return pair;
}

std::string BoundaryPair::family_name() const {
  switch (family_) {
    case Family::Linear:
      return "linear";
    case Family::Power:
      return "power";
    case Family::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

void BoundaryPair::validate(double lo, double hi, int samples) const {
  double prev_x = 0.0, prev_a = 0.0, prev_b = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (samples - 1));
    const double ax = a(x), bx = b(x);
    if (!(ax < bx)) {
      std::ostringstream os;
      os << "a(x) < b(x) violated at x=" << x;
      throw DomainError(kModule, os.str());
    }
    if (i > 0 && !(ax > prev_a && bx > prev_b)) {
      std::ostringstream os;
      os << "boundaries not strictly increasing between " << prev_x << " and " << x;
      throw DomainError(kModule, os.str());
    }
    prev_x = x;
    prev_a = ax;
    prev_b = bx;
  }
}

}  // namespace hslab::core
