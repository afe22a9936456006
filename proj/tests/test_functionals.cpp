#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hslab/errors.hpp"
#include "hslab/functionals.hpp"
#include "oracles.hpp"

using namespace hslab;
using core::BoundaryPair;
using core::Problem;
using core::Weight;
using core::WeightPair;

namespace {

Problem linear(double A, double B, Weight v, Weight w, double p = 2.0) {
  return Problem(BoundaryPair::linear(A, B), WeightPair(std::move(v), std::move(w), p));
}

// Everything a functional evaluation needs, kept alive together.
struct Setup {
  FairwayMap fm;
  GridSystem grid;
  Functionals fn;
  Setup(Problem pr, double lo, double hi, bool clip = true)
      : fm(std::move(pr)), grid(GridSystem::build(fm, lo, hi)), fn(fm, grid, clip) {}
};

// E1(x) = -Ei(-x); ∫_lo^hi x^{-1} e^{-λx} dx = E1(λ lo) - E1(λ hi).
double e1(double x) { return -std::expint(-x); }
double inv_exp_mass(double lam, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return e1(lam * lo) - e1(lam * hi);
}

}  // namespace

TEST_CASE("nu_tilde closed form for A=1, B=3, v=1, w=x^{-1/2}") {
  Setup s(linear(1, 3, Weight::constant(1), Weight::power(-0.5)), 1e-3, 1e3);
  for (const auto& cell : s.grid.cells()) {
    const auto nv = s.fn.nu_variants(cell);
    CHECK(nv.nu_tilde == doctest::Approx(std::sqrt(3.0 * std::log(3.0)) * std::pow(3.0, cell.k / 2.0)).epsilon(1e-12));
    CHECK(nv.nu_tilde <= nv.nu_bar);
    CHECK(nv.nu_bar <= nv.nu);
  }
}

TEST_CASE("nu and nu_bar against dense-sampling oracles") {
  // σ(t) = 2t, b^{-1}(σ) = 2t/3, a^{-1}(σ) = 2t, ∫ w^2 = ln(hi/lo), V(t) = 2t
  Setup s(linear(1, 3, Weight::constant(1), Weight::power(-0.5)), 1e-3, 1e3);
  for (const auto& cell : s.grid.cells()) {
    if (cell.k <= s.grid.xi().k_min + 1 || cell.k >= s.grid.xi().k_max() - 1) continue;
    const double lo = cell.xi_lo(), hi = cell.xi_hi();
    auto bar = [&](double t) {
      const double l = std::max(2 * t / 3, lo), r = std::min(2 * t, hi);
      return r > l ? std::sqrt(std::log(r / l) * 2 * t) : 0.0;
    };
    auto full = [&](double t) { return std::sqrt(std::log(3.0) * 2 * t); };
    const double ref_bar = oracle::dense_sup(bar, lo, hi, 200000);
    const double ref_full = std::sqrt(std::log(3.0) * 2 * hi);  // increasing in t
    const auto nv = s.fn.nu_variants(cell);
    CHECK(nv.nu_bar == doctest::Approx(ref_bar).epsilon(1e-6));
    CHECK(nv.nu_bar >= ref_bar * (1 - 1e-9));
    CHECK(nv.nu == doctest::Approx(ref_full).epsilon(1e-4));
    CHECK(nv.nu <= ref_full * (1 + 1e-12));
    CHECK(nv.gap_bar >= 0.0);
    CHECK(full(nv.argmax) == doctest::Approx(nv.nu).epsilon(1e-10));
  }
}

TEST_CASE("v = 0 gives zero functionals") {
  Setup s(linear(1, 3, Weight::zero(), Weight::power(-0.5)), 0.1, 10.0);
  for (const auto& nv : s.fn.nu_all()) {
    CHECK(nv.nu_tilde == 0.0);
    CHECK(nv.nu_bar == 0.0);
    CHECK(nv.nu == 0.0);
  }
  for (const auto& m : s.fn.mu_all()) CHECK(m.value == 0.0);
  CHECK(s.fn.functional_V(2.0).power == 0.0);
  CHECK(s.fn.functional_W(2.0).power == 0.0);
}

TEST_CASE("property: nu ordering on random configurations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double A = 0.2 + U(rng), B = A * (1.2 + 4.0 * U(rng));
    const double p = 1.3 + 2.5 * U(rng);
    const Weight v(0.5 + U(rng), -0.6 + 1.2 * U(rng), trial % 3 == 0 ? 0.05 * U(rng) : 0.0);
    const Weight w(0.5 + U(rng), -0.3 - 0.6 * U(rng), trial % 2 == 0 ? 0.1 * U(rng) : 0.0);
    Setup s(linear(A, B, v, w, p), 0.05, 20.0);
    for (const auto& nv : s.fn.nu_all({64, 40})) {
      CHECK(nv.nu_tilde <= nv.nu_bar + 1e-12);
      CHECK(nv.nu_bar <= nv.nu + 1e-12);
      CHECK(std::isfinite(nv.nu));
    }
  }
}

TEST_CASE("mu examples") {
  Setup s(linear(1, 3, Weight::constant(1), Weight::constant(1)), 0.1, 10.0);
  CHECK(s.fn.mu(1.0, 1.5) == doctest::Approx(std::sqrt(1.75)).epsilon(1e-13));
  Setup z(linear(1, 3, Weight::constant(1), Weight::zero()), 0.1, 10.0);
  CHECK(z.fn.mu(1.0, 1.5) == 0.0);
  // brute-force oracle on a decaying configuration
  Setup d(linear(1, 2.5, Weight(1.0, 0.3, 0.02), Weight(1.0, -0.4, 0.1)), 0.1, 10.0);
  const double wm = oracle::log_simpson([](double x) { return std::pow(x, -0.8) * std::exp(-0.2 * x); }, 1.2, 1.9);
  const double vm = oracle::log_simpson([](double y) { return std::pow(y, 0.6) * std::exp(-0.04 * y); }, 1.2, 1.9 * 2.5);
  CHECK(d.fn.mu(1.2, 1.9) == doctest::Approx(std::sqrt(wm * vm)).epsilon(1e-9));
}

TEST_CASE("Hoelder subdivision check") {
  Setup s(linear(1, 3, Weight::constant(1), Weight::power(-0.5)), 0.1, 10.0);
  const auto h0 = s.fn.holder_subdivision_check(1.5, 2.25, {});
  // no cuts: the a- and b-ranges of a single μ cell do not overlap here
  CHECK(h0.holds);
  const double mid[] = {1.875};
  const auto h1 = s.fn.holder_subdivision_check(1.5, 2.25, mid);
  CHECK(h1.holds);
  // direct evaluation of both sides
  auto term = [](double lo, double hi) {
    return std::sqrt(std::log(hi / lo) * ((hi - lo) + 3 * (hi - lo)));
  };
  CHECK(h1.lhs == doctest::Approx(term(1.5, 1.875) + term(1.875, 2.25)).epsilon(1e-12));
  CHECK(h1.rhs == doctest::Approx(std::sqrt(std::log(1.5) * (6.75 - 1.5))).epsilon(1e-12));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double B = 1.3 + 4 * U(rng), p = 1.2 + 3 * U(rng);
    Setup r(linear(1, B, Weight(1.0, -0.5 + U(rng), 0.02), Weight(1.0, -0.7 * U(rng), 0.0), p), 0.1, 10.0);
    for (const auto& m : r.grid.mu_cells()) {
      std::vector<double> cuts;
      for (int i = 0; i < 5; ++i) cuts.push_back(m.lo + (m.hi - m.lo) * (0.01 + 0.98 * U(rng)));
      std::sort(cuts.begin(), cuts.end());
      CHECK(r.fn.holder_subdivision_check(m.lo, m.hi, cuts).holds);
    }
  }
}

TEST_CASE("V against a dense log-trapezoid oracle") {
  // A=1, B=3, v=1, w^2 = x^{-1} e^{-x/10}, p = α = 2: the v-factor has exponent 0
  const double lam = 0.1;
  Setup s(linear(1, 3, Weight::constant(1), Weight(1.0, -0.5, lam / 2)), 0.05, 40.0);
  const double X0 = s.grid.lo(), X1 = s.grid.hi();
  auto inner = [&](double lo, double hi) { return inv_exp_mass(lam, std::max(lo, X0), std::min(hi, X1)); };
  const double ref = oracle::log_trapezoid([&](double t) { return inner(t / 3, t); }, X0, 3 * X1, 100000);
  const auto V = s.fn.functional_V(2.0);
  CHECK(V.power == doctest::Approx(ref).epsilon(1e-6));
  CHECK(V.root == doctest::Approx(std::sqrt(ref)).epsilon(1e-6));
}

TEST_CASE("W against a dense log-trapezoid oracle") {
  // α = 3, p = 2, v = 1: σ(t) = 2t; W^3 = ∫ [w-mass on (2t/3, 2t)]^{1/2} (2t)^{3/2} w^2(t) dt
  const double lam = 0.1;
  Setup s(linear(1, 3, Weight::constant(1), Weight(1.0, -0.5, lam / 2)), 0.05, 40.0);
  const double X0 = s.grid.lo(), X1 = s.grid.hi();
  auto integrand = [&](double t) {
    const double m = inv_exp_mass(lam, std::max(2 * t / 3, X0), std::min(2 * t, X1));
    return std::sqrt(m) * std::pow(2 * t, 1.5) * std::exp(-lam * t) / t;
  };
  const double ref = oracle::log_trapezoid(integrand, X0, X1, 100000);
  CHECK(s.fn.functional_W(3.0).power == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("homogeneity of V, W and F") {
  const Weight v(1.0, 0.2, 0.0), w(1.0, -0.5, 0.05);
  const double lam = 1.7;
  for (double alpha : {1.5, 2.0, 3.0}) {
    Setup base(linear(1, 2.5, v, w), 0.1, 10.0);
    Setup sw(linear(1, 2.5, v, w.scaled(lam)), 0.1, 10.0);
    Setup sv(linear(1, 2.5, v.scaled(lam), w), 0.1, 10.0);
    const double f = std::pow(lam, alpha);
    CHECK(sw.fn.functional_V(alpha).power == doctest::Approx(f * base.fn.functional_V(alpha).power).epsilon(1e-9));
    CHECK(sv.fn.functional_V(alpha).power == doctest::Approx(f * base.fn.functional_V(alpha).power).epsilon(1e-9));
    CHECK(sw.fn.functional_W(alpha).power == doctest::Approx(f * base.fn.functional_W(alpha).power).epsilon(1e-9));
    CHECK(sv.fn.functional_W(alpha).power == doctest::Approx(f * base.fn.functional_W(alpha).power).epsilon(1e-9));
  }
  Setup f1(linear(1, 2, Weight::constant(1), w), 0.5, 8.0);
  Setup f2(linear(1, 2, Weight::constant(1), w.scaled(lam)), 0.5, 8.0);
  CHECK(f2.fn.example_F_cell(2.5, 0).root == doctest::Approx(lam * f1.fn.example_F_cell(2.5, 0).root).epsilon(1e-9));
}

TEST_CASE("Example functional F") {
  Setup s(linear(1, 2, Weight::constant(1), Weight::power(-0.5)), 0.5, 8.0);
  CHECK(s.fn.example_F_cell(2.0, 0).root == doctest::Approx(1.0).epsilon(1e-10));
  Setup z(linear(1, 2, Weight::constant(1), Weight::zero()), 0.5, 8.0);
  CHECK(z.fn.example_F_cell(2.0, 0).power == 0.0);
  Setup bad(linear(1, 2, Weight::power(0.5), Weight::power(-0.5)), 0.5, 8.0);
  CHECK_THROWS_AS(bad.fn.example_F_cell(2.0, 0), ConfigError);
  Setup pw(Problem(BoundaryPair::power(1, 2, 1.5), WeightPair(Weight::constant(1), Weight::power(-0.5), 2)), 0.5, 8.0);
  CHECK_THROWS_AS(pw.fn.example_F_sum(2.0), ConfigError);
  // summed F equals W with v = 1 when nothing is truncated
  Setup u(linear(1, 3, Weight::constant(1), Weight(1.0, -0.5, 0.05)), 0.05, 40.0, false);
  for (double alpha : {2.0, 3.0})
    CHECK(u.fn.example_F_sum(alpha).power == doctest::Approx(u.fn.functional_W(alpha).power).epsilon(1e-9));
}

TEST_CASE("schatten sums") {
  std::vector<double> geo;
  for (int i = 0; i < 60; ++i) geo.push_back(std::pow(0.5, i));
  CHECK(schatten_sum(geo, 2.0).norm == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
  const std::vector<double> one{1, 0, 0, 0};
  for (double a : {0.3, 1.0, 2.0, 7.0}) CHECK(schatten_sum(one, a).norm == 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> s(100);
  for (auto& x : s) x = U(rng);
  std::sort(s.rbegin(), s.rend());
  double prev = std::numeric_limits<double>::infinity();
  for (double a : {0.5, 1.0, 1.5, 2.0, 3.0, 10.0}) {
    const double n = schatten_sum(s, a).norm;
    CHECK(n <= prev);
    prev = n;
  }
  const std::vector<double> huge{1e300, 1e300};
  CHECK(schatten_sum(huge, 2.0).overflow);
}

TEST_CASE("nu_tilde tail estimate") {
  Setup wide(linear(1, 3, Weight::constant(1), Weight(1.0, -0.5, 0.05)), 1e-8, 1e3);
  const auto nus = wide.fn.nu_all({16, 10});
  const auto t = wide.fn.nu_tilde_tail(2.0, nus);
  CHECK(t.certified);
  CHECK(t.relative < 1e-6);
  Setup narrow(linear(1, 3, Weight::constant(1), Weight(1.0, -0.5, 0.05)), 1e-2, 1e2);
  const auto n2 = narrow.fn.nu_all({16, 10});
  const auto t2 = narrow.fn.nu_tilde_tail(2.0, n2);
  CHECK_FALSE(t2.certified);
  CHECK(t2.relative > 1e-6);
  // no decay at infinity: geometric growth, never certified
  Setup grow(linear(1, 3, Weight::constant(1), Weight::power(-0.5)), 1e-2, 1e2);
  CHECK_FALSE(grow.fn.nu_tilde_tail(2.0, grow.fn.nu_all({16, 10})).certified);
}

TEST_CASE("parallel and serial evaluation agree bitwise") {
  Setup s(linear(0.7, 2.2, Weight(1.0, 0.1, 0.03), Weight(1.0, -0.4, 0.05), 1.8), 0.02, 50.0);
  const auto a = s.fn.nu_all({64, 30}, false), b = s.fn.nu_all({64, 30}, true);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].nu == b[i].nu);
    CHECK(a[i].nu_bar == b[i].nu_bar);
  }
  CHECK(s.fn.functional_V(1.5, false).power == s.fn.functional_V(1.5, true).power);
  CHECK(s.fn.functional_W(2.5, false).power == s.fn.functional_W(2.5, true).power);
  const auto m1 = s.fn.mu_all(false), m2 = s.fn.mu_all(true);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i].value == m2[i].value);
}
