#include "hslab/core/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hslab/errors.hpp"

namespace hslab::core {

namespace {
constexpr const char* kModule = "function-core";
}

Weight::Weight(double coef, double exponent, double decay, double lo, double hi)
    : coef_(coef), exponent_(exponent), decay_(decay), lo_(lo), hi_(hi) {
  if (!(coef >= 0.0) || !std::isfinite(coef))
    throw DomainError(kModule, "weight coefficient must be finite and nonnegative");
  if (!std::isfinite(exponent)) throw DomainError(kModule, "weight exponent must be finite");
  if (!(decay >= 0.0) || !std::isfinite(decay))
    throw DomainError(kModule, "weight decay rate must be finite and nonnegative");
  if (!(lo >= 0.0) || !(hi >= lo)) throw DomainError(kModule, "weight support must satisfy 0 <= lo <= hi");
}

Weight Weight::scaled(double factor) const {
  Weight w(coef_ * factor, exponent_, decay_, lo_, hi_);
  return w;
}

double Weight::operator()(double x) const {
  if (coef_ == 0.0 || x < lo_ || x > hi_ || x <= 0.0) return 0.0;
  double val = coef_;
  if (exponent_ != 0.0) val *= std::pow(x, exponent_);
  if (decay_ != 0.0) val *= std::exp(-decay_ * x);
  return val;
}

double Weight::pow(double x, double r) const {
  if (coef_ == 0.0 || x < lo_ || x > hi_ || x <= 0.0) return 0.0;
  const double log_val = std::log(coef_) + exponent_ * std::log(x) - decay_ * x;
  return std::exp(r * log_val);
}

double Weight::closed_form(double r, double t1, double t2) const {
  const double cr = std::pow(coef_, r);
  const double s = exponent_ * r + 1.0;
  if (t1 == 0.0) {
    if (s <= 0.0 || std::isinf(t2)) {
      throw DivergentIntegralError(kModule, "weight power not integrable on [0, " +
                                                std::to_string(t2) + "]");
    }
    return cr * std::pow(t2, s) / s;
  }
  if (std::isinf(t2)) {
    if (s >= 0.0) throw DivergentIntegralError(kModule, "weight power not integrable at infinity");
    return cr * std::pow(t1, s) / (-s);
  }
  const double log_ratio = std::log1p((t2 - t1) / t1);
  if (s == 0.0) return cr * log_ratio;
  return cr * std::pow(t1, s) * std::expm1(s * log_ratio) / s;
}

double Weight::mass(double r, double t1, double t2, double rel_tol) const {
  if (t2 < t1) return -mass(r, t2, t1, rel_tol);
  if (is_zero()) return 0.0;
  const double u1 = std::max(t1, lo_);
  const double u2 = std::min(t2, hi_);
  if (!(u2 > u1)) return 0.0;
  if (decay_ == 0.0) return closed_form(r, u1, u2);
  if (std::isinf(u2)) throw DivergentIntegralError(kModule, "infinite range needs a closed form");
  if (cache_ && r == cache_r_) return cache_->between(u1, u2);
  return integrate_power([this](double x) { return (*this)(x); }, r, u1, u2, rel_tol);
}

void Weight::attach_cache(double r, double lo, double hi, int cells, double rel_tol) {
  if (decay_ == 0.0 || is_zero()) return;
  Weight bare(coef_, exponent_, decay_, lo_, hi_);
  cache_r_ = r;
  cache_ = std::make_shared<const CumulativeIntegral>(
      [bare](double x) { return bare(x); }, r, lo, hi, cells, rel_tol,
      std::vector<double>{lo_, hi_});
}

std::string Weight::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_zero()) return "0";
  os << coef_;
  if (exponent_ != 0.0) os << "*x^" << exponent_;
  if (decay_ != 0.0) os << "*exp(-" << decay_ << "x)";
  if (!has_full_support()) os << " on [" << lo_ << ", " << hi_ << "]";
  return os.str();
}

}  // namespace hslab::core
