#include "hslab/core/problem.hpp"

#include <algorithm>
#include <cmath>

#include "hslab/errors.hpp"

namespace hslab::core {

WeightPair::WeightPair(Weight v_, Weight w_, double p_)
    : v(std::move(v_)), w(std::move(w_)), p(p_) {
  if (!(p_ > 1.0) || !std::isfinite(p_)) throw DomainError("function-core", "need 1 < p < inf");
  pprime = p_ / (p_ - 1.0);
}

Problem::Problem(BoundaryPair bounds, WeightPair weights, Tolerances tol)
    : bounds_(std::move(bounds)), weights_(std::move(weights)), tol_(tol) {}

void Problem::prepare_caches(double x_lo, double x_hi, int cells) {
  if (!(x_lo > 0.0 && x_hi > x_lo)) throw DomainError("function-core", "cache range must be positive");
  const double y_lo = a(x_lo), y_hi = b(x_hi);
  // v is needed over the whole y-range; w also over b^{-1}, a^{-1} images
  // of that range.
  weights_.v.attach_cache(pprime(), y_lo, y_hi, cells, tol_.quad);
  const double wx_lo = std::min(x_lo, b_inv(y_lo));
  const double wx_hi = std::max(x_hi, a_inv(y_hi));
  weights_.w.attach_cache(p(), wx_lo, wx_hi, cells, tol_.quad);
}

}  // namespace hslab::core
