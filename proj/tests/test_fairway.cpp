#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/errors.hpp"
#include "hslab/fairway.hpp"
#include "oracles.hpp"

using namespace hslab;
using core::BoundaryPair;
using core::Problem;
using core::Weight;
using core::WeightPair;

namespace {

Problem linear_problem(double A, double B, Weight v, Weight w = Weight::power(-0.5),
                       double p = 2.0) {
  return Problem(BoundaryPair::linear(A, B), WeightPair(std::move(v), std::move(w), p));
}

}  // namespace

TEST_CASE("linear family with v = 1: sigma is the midpoint (A+B)t/2") {
  for (auto mode : {FairwayMap::Mode::Auto, FairwayMap::Mode::Numeric}) {
    const FairwayMap fm(linear_problem(1.0, 3.0, Weight::constant(1.0)), mode);
    CHECK(fm.sigma(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fm.sigma(7.5) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(fm.sigma_inverse(4.0) == doctest::Approx(2.0).epsilon(1e-12));
  }
  // midpoint for any boundaries when v is constant
  const FairwayMap pw(Problem(BoundaryPair::power(0.5, 2.0, 1.7),
                              WeightPair(Weight::constant(2.5), Weight::constant(1.0), 3.0)));
  for (double t : {0.01, 0.3, 1.0, 12.0}) {
    const double mid = 0.5 * (0.5 + 2.0) * std::pow(t, 1.7);
    CHECK(pw.sigma(t) == doctest::Approx(mid).epsilon(1e-12));
  }
}

TEST_CASE("v(y) = y, p = 2, a = t, b = 2t: sigma(1) = (9/2)^{1/3}") {
  // v^{p'} = y^2, so the balance reads σ^3 - 1 = 8 - σ^3.
  const double exact = std::cbrt(4.5);
  for (auto mode : {FairwayMap::Mode::Auto, FairwayMap::Mode::Numeric}) {
    const FairwayMap fm(linear_problem(1.0, 2.0, Weight::power(1.0)), mode);
    CHECK(fm.sigma(1.0) == doctest::Approx(exact).epsilon(1e-11));
    CHECK(fm.sigma_inverse(exact) == doctest::Approx(1.0).epsilon(1e-11));
  }
  // quadrature oracle for the balance at the computed point
  const double s = FairwayMap(linear_problem(1.0, 2.0, Weight::power(1.0))).sigma(1.0);
  const double left = oracle::simpson([](double y) { return y * y; }, 1.0, s);
  const double right = oracle::simpson([](double y) { return y * y; }, s, 2.0);
  CHECK(std::abs(left - right) <= 1e-9 * (left + right));
}

TEST_CASE("property: round trip and inverse balance on random y") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  const std::vector<Problem> problems = {
      linear_problem(1.0, 3.0, Weight::power(-0.3)),
      Problem(BoundaryPair::power(0.5, 1.0, 1.5),
              WeightPair(Weight::power(0.4), Weight::power(-0.5), 1.5)),
      linear_problem(1.0, 2.5, Weight(1.0, -0.2, 0.05)),
  };
  for (const auto& pr : problems) {
    const FairwayMap fm(pr, FairwayMap::Mode::Numeric);
    const int n = pr.v().decay() > 0.0 ? 100 : 1000;
    for (int i = 0; i < n; ++i) {
      const double y = std::exp(U(rng));
      CHECK(fm.inverse_balance_residual(y) <= 1e-9);
      const double t = fm.sigma_inverse(y);
      CHECK(std::abs(fm.sigma(t) - y) <= 1e-12 * (1 + y));
    }
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -3.0 + 6.0 * i / 99.0);
      CHECK(fm.sigma_inverse(fm.sigma(t)) == doctest::Approx(t).epsilon(1e-11));
      const double s = fm.sigma(t);
      CHECK(s > pr.a(t));
      CHECK(s < pr.b(t));
      CHECK(fm.balance_residual(t) <= 1e-9);
    }
    CHECK(fm.monotonicity_violations(1e-3, 1e3, 400) == 0);
  }
}

TEST_CASE("auto and numeric modes agree") {
  const Problem pr(BoundaryPair::power(0.3, 1.1, 0.8),
                   WeightPair(Weight::power(-0.6, 2.0), Weight::constant(1.0), 2.5));
  const FairwayMap fast(pr, FairwayMap::Mode::Auto), slow(pr, FairwayMap::Mode::Numeric);
  CHECK(fast.scaling_form());
  CHECK_FALSE(slow.scaling_form());
  for (double t : {1e-4, 0.02, 0.7, 3.0, 800.0}) {
    CHECK(fast.sigma(t) == doctest::Approx(slow.sigma(t)).epsilon(1e-11));
    CHECK(fast.sigma_inverse(t) == doctest::Approx(slow.sigma_inverse(t)).epsilon(1e-10));
  }
}

TEST_CASE("scale covariance for the linear family") {
  const FairwayMap fm(linear_problem(1.0, 4.0, Weight(1.0, 0.5, 0.1)));
  CHECK_FALSE(fm.scaling_form());
  const FairwayMap pure(linear_problem(1.0, 4.0, Weight::power(0.5)), FairwayMap::Mode::Numeric);
  for (double t : {0.1, 1.0, 10.0})
    for (double c : {0.5, 3.0, 17.0})
      CHECK(pure.sigma(c * t) == doctest::Approx(c * pure.sigma(t)).epsilon(1e-10));
}

TEST_CASE("zero v mass raises ZeroMassError") {
  const FairwayMap zero(linear_problem(1.0, 3.0, Weight::zero()));
  CHECK_THROWS_AS(zero.sigma(1.0), ZeroMassError);
  // v supported on [10, 20]: no mass on [a(1), b(1)] = [1, 3]
  const FairwayMap cut(linear_problem(1.0, 3.0, Weight(1.0, 0.0, 0.0, 10.0, 20.0)));
  CHECK_THROWS_AS(cut.sigma(1.0), ZeroMassError);
  CHECK(cut.sigma(5.0) == doctest::Approx(12.5));
  try {
    zero.sigma(1.0);
  } catch (const Error& e) {
    CHECK(e.code() == "fairway.ZeroMassError");
  }
}

TEST_CASE("sigma inverse outside the range") {
  const FairwayMap fm(linear_problem(1.0, 3.0, Weight::constant(1.0)), FairwayMap::Mode::Numeric);
  CHECK_THROWS_AS(fm.sigma_inverse(-1.0), BracketError);
}
