#include "hslab/fairway.hpp"

#include <cmath>
#include <sstream>

#include "hslab/core/monotone.hpp"
#include "hslab/errors.hpp"

namespace hslab {

namespace {
constexpr const char* kModule = "fairway";
}

FairwayMap::FairwayMap(core::Problem problem, Mode mode) : problem_(std::move(problem)) {
  const auto& bp = problem_.bounds();
  const bool scalable_bounds = bp.family() != core::BoundaryPair::Family::Tabulated;
  if (mode == Mode::Auto && scalable_bounds && problem_.v().is_pure_power() &&
      !problem_.v().is_zero()) {
    // a = A t^γ, b = B t^γ and v = c y^β: substituting y = t^γ z shows σ(t) = σ(1) t^γ.
    coef_ = sigma_numeric(1.0);
    gamma_ = bp.gamma();
    scaling_ = true;
  }
}

double FairwayMap::sigma_numeric(double t) const {
  if (!(t > 0.0)) throw DomainError(kModule, "sigma needs t > 0");
  const double lo = problem_.a(t), hi = problem_.b(t);
  const double total = problem_.v_mass(lo, hi);
  if (!std::isfinite(total)) throw DivergentIntegralError(kModule, "infinite v-mass on [a(t), b(t)]");
  if (total == 0.0) {
    std::ostringstream os;
    os << "zero v^{p'} mass on [a(t), b(t)] at t=" << t;
    throw ZeroMassError(kModule, os.str());
  }
  return core::invert_monotone([&](double s) { return problem_.v_mass(lo, s); }, 0.5 * total, lo,
                               hi, problem_.tol().inv);
}

double FairwayMap::sigma(double t) const {
  if (scaling_) {
    if (!(t > 0.0)) throw DomainError(kModule, "sigma needs t > 0");
    return coef_ * (gamma_ == 1.0 ? t : std::pow(t, gamma_));
  }
  return sigma_numeric(t);
}

double FairwayMap::sigma_inverse_numeric(double y) const {
  const double lo = problem_.b_inv(y), hi = problem_.a_inv(y);
  try {
    return core::invert_monotone([&](double t) { return sigma(t); }, y, lo, hi, problem_.tol().inv);
  } catch (const BracketError& e) {
    throw BracketError(kModule, std::string("sigma^{-1}: ") + e.what());
  } catch (const NonMonotoneError& e) {
    throw NonMonotoneError(kModule, std::string("sigma is not increasing: ") + e.what());
  }
}

double FairwayMap::sigma_inverse(double y) const {
  if (!(y > 0.0)) throw BracketError(kModule, "sigma^{-1} needs y > 0");
  if (scaling_) return gamma_ == 1.0 ? y / coef_ : std::pow(y / coef_, 1.0 / gamma_);
  return sigma_inverse_numeric(y);
}

double FairwayMap::balance_residual(double t) const {
  const double lo = problem_.a(t), hi = problem_.b(t), s = sigma(t);
  const double left = problem_.v_mass(lo, s), right = problem_.v_mass(s, hi);
  const double total = left + right;
  return total > 0.0 ? std::abs(left - right) / total : 0.0;
}

double FairwayMap::inverse_balance_residual(double y) const {
  const double t = sigma_inverse(y);
  const double left = problem_.v_mass(problem_.a(t), y);
  const double right = problem_.v_mass(y, problem_.b(t));
  const double total = left + right;
  return total > 0.0 ? std::abs(left - right) / total : 0.0;
}

std::vector<FairwayMap::Sample> FairwayMap::tabulate(double lo, double hi, int n) const {
  std::vector<Sample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    out.push_back({t, sigma(t), balance_residual(t)});
  }
  return out;
}

int FairwayMap::monotonicity_violations(double lo, double hi, int n) const {
  int bad = 0;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    const double s = sigma(t);
    if (i > 0 && !(s > prev)) ++bad;
    prev = s;
  }
  return bad;
}

}  // namespace hslab
