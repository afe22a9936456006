#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/core/monotone.hpp"
#include "hslab/core/problem.hpp"
#include "hslab/core/quadrature.hpp"
#include "hslab/core/weight.hpp"
#include "hslab/errors.hpp"
#include "oracles.hpp"

using namespace hslab;
using namespace hslab::core;

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 4, 7, 16, 40}) {
    const Rule r = gauss_legendre(n);
    double sum_w = 0.0, moment = 0.0;
    const int deg = 2 * n - 2;  // even moment of degree 2n-2
    for (int i = 0; i < n; ++i) {
      sum_w += r.weights[i];
      moment += r.weights[i] * std::pow(r.nodes[i], deg);
    }
    CHECK(sum_w == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("log_gauss_panels integrate powers over decades") {
  std::vector<double> breaks;
  for (int i = 0; i <= 40; ++i) breaks.push_back(std::pow(10.0, -2.0 + 0.1 * i));
  const NodeSet ns = log_gauss_panels(breaks, 6);
  double s = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) s += ns.weight[i] * std::pow(ns.x[i], -0.5);
  CHECK(s == doctest::Approx(2.0 * (std::sqrt(100.0) - std::sqrt(0.01))).epsilon(1e-11));
}

TEST_CASE("invert_monotone spec examples") {
  CHECK(invert_monotone([](double x) { return 2 * x; }, 4.0, 0.0, 10.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(invert_monotone([](double x) { return x * x * x; }, 8.0, 0.0, 10.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("invert_monotone on a tabulated x + sin(x)/2 against a bisection oracle") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 50; ++i) {
    const double x = 10.0 * i / 49.0;
    xs.push_back(x);
    ys.push_back(x + std::sin(x) / 2);
  }
  const MonotoneTable table(xs, ys);
  const double x_star = table.inverse(3.0);
  CHECK(std::abs(table(x_star) - 3.0) <= 1e-10);
  const double ref = oracle::bisect([&](double t) { return table(t); }, 3.0, 0.0, 10.0, 1e-14);
  CHECK(x_star == doctest::Approx(ref).epsilon(1e-12));
  // the generic inverter on the same table
  const double x_gen = invert_monotone([&](double t) { return table(t); }, 3.0, 0.0, 10.0);
  CHECK(std::abs(table(x_gen) - 3.0) <= 1e-10);
  // interpolant is monotone between knots
  double prev = table(0.0);
  for (int i = 1; i <= 5000; ++i) {
    const double cur = table(10.0 * i / 5000.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("invert_monotone errors") {
  auto f = [](double x) { return 2 * x; };
  CHECK_THROWS_AS(invert_monotone(f, 30.0, 0.0, 10.0), BracketError);
  CHECK_THROWS_AS(invert_monotone(f, -1.0, 0.0, 10.0), BracketError);
  CHECK_THROWS_AS(invert_monotone([](double x) { return -x; }, -1.0, 0.0, 10.0), NonMonotoneError);
  // increasing ends but a bump in the middle
  auto bumpy = [](double x) { return x + (std::abs(x - 5.0) < 1.0 ? 100.0 : 0.0); };
  CHECK_THROWS_AS(invert_monotone(bumpy, 5.5, 0.0, 10.0), NonMonotoneError);
  try {
    invert_monotone(f, 30.0, 0.0, 10.0);
  } catch (const Error& e) {
    CHECK(e.code() == "function-core.BracketError");
    CHECK(e.kind() == ErrorKind::Numeric);
  }
}

TEST_CASE("integrate_power spec examples") {
  auto one = [](double) { return 1.0; };
  CHECK(integrate_power(one, 1.0, 2.0, 5.0) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(integrate_power([](double y) { return y; }, 2.0, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  const double v = integrate_power([](double y) { return std::pow(y, -0.25); }, 2.0, 0.0, 1.0);
  // oracle: substitute y = s^2, the integrand becomes the constant 2
  const double ref = oracle::simpson([](double s) { return s > 0 ? std::pow(s * s, -0.5) * 2 * s : 2.0; }, 0.0, 1.0);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(v == doctest::Approx(ref).epsilon(1e-10));
  CHECK(integrate_power(one, 1.0, 3.0, 3.0) == 0.0);
}

TEST_CASE("integrate_power signals non-integrable singularities") {
  CHECK_THROWS_AS(integrate_power([](double y) { return 1.0 / y; }, 1.0, 0.0, 1.0),
                  DivergentIntegralError);
  CHECK_THROWS_AS(integrate([](double) { return NAN; }, 0.0, 1.0, 1e-10), DivergentIntegralError);
}

TEST_CASE("property: quadrature additivity over random splits") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = -0.9 + 3.0 * U(rng);
    const double lam = U(rng);
    auto u = [=](double y) { return std::pow(y, beta) * std::exp(-lam * y); };
    const double t1 = 0.01 + U(rng), t3 = t1 + 5.0 * U(rng) + 0.01;
    const double t2 = t1 + (t3 - t1) * U(rng);
    const double whole = integrate_power(u, 1.0, t1, t3);
    const double parts = integrate_power(u, 1.0, t1, t2) + integrate_power(u, 1.0, t2, t3);
    CHECK(std::abs(whole - parts) <= 10 * 1e-10 * whole);
  }
}

TEST_CASE("property: integrate_power matches closed forms for y^beta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double beta = -0.95 + 4.0 * U(rng);
    const double r = 0.5 + 2.0 * U(rng);
    if (beta * r <= -0.95) continue;
    const double t1 = (trial % 3 == 0) ? 0.0 : std::exp(-5.0 + 6.0 * U(rng));
    const double t2 = t1 + std::exp(-3.0 + 6.0 * U(rng));
    const double s = beta * r + 1.0;
    const double exact = (std::pow(t2, s) - std::pow(t1, s)) / s;
    const double num = integrate_power([=](double y) { return std::pow(y, beta); }, r, t1, t2);
    CHECK(num == doctest::Approx(exact).epsilon(1e-8));
    CHECK(Weight::power(beta).mass(r, t1, t2) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("round trip inverses for every boundary family") {
  std::vector<double> xs, as, bs;
  for (int i = 0; i <= 60; ++i) {
    const double x = std::pow(10.0, -3.0 + 0.1 * i);
    xs.push_back(x);
    as.push_back(0.5 * x * (1.0 + 0.2 * std::sin(std::log(x)) * 0.3));
    bs.push_back(2.0 * std::pow(x, 1.1));
  }
  const std::vector<BoundaryPair> fams = {BoundaryPair::linear(1.0, 3.0),
                                          BoundaryPair::power(0.5, 1.0, 1.5),
                                          BoundaryPair::tabulated(xs, as, bs)};
  for (const auto& bp : fams) {
    for (int i = 0; i < 1000; ++i) {
      const double x = std::pow(10.0, -4.0 + 8.0 * i / 999.0);
      CHECK(bp.a_inv(bp.a(x)) == doctest::Approx(x).epsilon(1e-12));
      CHECK(bp.b_inv(bp.b(x)) == doctest::Approx(x).epsilon(1e-12));
      const double y = x;
      CHECK(std::abs(bp.a(bp.a_inv(y)) - y) <= 1e-12 * (1 + y));
    }
    bp.validate();
  }
}

TEST_CASE("boundary validation rejects a >= b") {
  CHECK_THROWS_AS(BoundaryPair::linear(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(BoundaryPair::linear(3.0, 1.0), DomainError);
  CHECK_THROWS_AS(BoundaryPair::power(1.0, 2.0, -1.0), DomainError);
  CHECK_THROWS_AS(BoundaryPair::tabulated({1, 2, 3}, {1, 2, 3}, {1, 1.5, 4}), DomainError);
}

TEST_CASE("tabulated power data reproduces the power law in log-log") {
  std::vector<double> xs, as, bs;
  for (int i = 0; i <= 20; ++i) {
    const double x = std::pow(10.0, -2.0 + 0.2 * i);
    xs.push_back(x);
    as.push_back(0.5 * std::pow(x, 1.5));
    bs.push_back(std::pow(x, 1.5));
  }
  const auto tab = BoundaryPair::tabulated(xs, as, bs);
  for (double x : {1e-5, 0.003, 0.7, 1.0, 42.0, 1e6}) {
    CHECK(tab.a(x) == doctest::Approx(0.5 * std::pow(x, 1.5)).epsilon(1e-12));
    CHECK(tab.b(x) == doctest::Approx(std::pow(x, 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("weight masses: closed forms, decay, support clipping") {
  const Weight w = Weight::power(-0.5);
  CHECK(w.mass(2.0, 1.0, 4.0) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(w.mass(2.0, 0.0, 1.0), DivergentIntegralError);
  const Weight d(1.0, -0.5, 0.05);
  const double ref = oracle::log_simpson([&](double x) { return d.pow(x, 2.0); }, 0.5, 30.0);
  CHECK(d.mass(2.0, 0.5, 30.0) == doctest::Approx(ref).epsilon(1e-10));
  const Weight cut(2.0, 0.0, 0.0, 1.0, 2.0);
  CHECK(cut.mass(1.0, 0.0, 10.0) == doctest::Approx(2.0));
  CHECK(cut(0.5) == 0.0);
  CHECK(Weight::zero().mass(2.0, 1.0, 5.0) == 0.0);
  CHECK(w.scaled(3.0).mass(2.0, 1.0, 4.0) == doctest::Approx(9.0 * std::log(4.0)));
}

TEST_CASE("CumulativeIntegral: monotone and additive") {
  CumulativeIntegral ci([](double y) { return std::pow(y, -0.3) * std::exp(-0.1 * y); }, 2.0,
                        0.01, 100.0, 256, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(std::log(0.01), std::log(100.0));
  for (int i = 0; i < 200; ++i) {
    double t[3] = {std::exp(U(rng)), std::exp(U(rng)), std::exp(U(rng))};
    std::sort(t, t + 3);
    const double c12 = ci.between(t[0], t[1]), c23 = ci.between(t[1], t[2]),
                 c13 = ci.between(t[0], t[2]);
    CHECK(c12 >= 0.0);
    CHECK(std::abs(c12 + c23 - c13) <= 1e-9 * c13);
    CHECK(ci.from_reference(t[2]) >= ci.from_reference(t[1]));
    const double direct = integrate_power(
        [](double y) { return std::pow(y, -0.3) * std::exp(-0.1 * y); }, 2.0, t[0], t[2], 1e-12);
    CHECK(c13 == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("WeightPair conjugate exponent") {
  for (double p : {1.1, 1.5, 2.0, 3.0, 7.0}) {
    const WeightPair wp(Weight::constant(1.0), Weight::constant(1.0), p);
    CHECK(std::abs(1.0 / p + 1.0 / wp.pprime - 1.0) <= 4e-16);
  }
  CHECK_THROWS_AS(WeightPair(Weight::constant(1.0), Weight::constant(1.0), 1.0), DomainError);
}

TEST_CASE("problem caches agree with uncached masses") {
  Problem plain(BoundaryPair::linear(1.0, 3.0),
                WeightPair(Weight(1.0, -0.5, 0.05), Weight(1.0, -0.5, 0.05), 2.0));
  Problem cached = plain;
  cached.prepare_caches(0.1, 50.0);
  for (double t : {0.2, 0.5, 1.0, 4.0, 20.0}) {
    CHECK(cached.v_mass(t, 2 * t) == doctest::Approx(plain.v_mass(t, 2 * t)).epsilon(1e-10));
    CHECK(cached.w_mass(t, 2 * t) == doctest::Approx(plain.w_mass(t, 2 * t)).epsilon(1e-10));
  }
}
