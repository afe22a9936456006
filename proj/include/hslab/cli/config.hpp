#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hslab/core/problem.hpp"
#include "hslab/functionals.hpp"
#include "hslab/lab/discrete.hpp"
#include "hslab/lab/kappa.hpp"

namespace hslab::cli {

using json = nlohmann::ordered_json;

struct BoundarySpec {
  std::string family = "linear";  // linear | power | tabulated
  double A = 1.0, B = 3.0, gamma = 1.0;
  std::vector<double> x, a, b;     // tabulated only
};

struct WeightSpec {
  double coef = 1.0, exponent = 0.0, decay = 0.0;
  double lo = 0.0, hi = core::Weight::kInf;
};

struct ProblemConfig {
  BoundarySpec boundaries;
  WeightSpec v, w;
  double p = 2.0;
  std::vector<double> alpha{2.0};
  double t_lo = 1e-2, t_hi = 1e2;
  double anchor = 1.0;
  lab::Resolution resolution{};
  lab::Resolution kappa_resolution{160, 320, 4};
  core::Tolerances tolerances{};
  double beta_p = 1.0, gamma_p = 1.0;
  std::uint64_t seed = 0;
  NuOptions nu{};
  int fairway_samples = 41;
  bool refine_spectrum = true;               // spectrum: compare against 2x resolution
  std::vector<std::pair<double, double>> kappa_intervals;  // explicit (d, e)
  int kappa_random = 0;                      // plus this many seeded random intervals
  std::vector<double> eps_fractions{0.25, 0.125, 0.0625};  // of ||H||
  std::vector<double> sweep_ratios{1.5, 2.0, 3.0, 5.0};
  int holder_cut_sets = 5;
  double holder_tol = 1e-8;
};

// SchemaError (with the offending field path) for malformed input, DomainError
// for values that violate the operator's standing assumptions.
ProblemConfig parse_config(const json& j);
ProblemConfig load_config(const std::string& path);

// Normalized form with every default filled in; parse_config(to_json(c))
// reproduces c exactly.
json to_json(const ProblemConfig& c);

core::BoundaryPair make_boundaries(const BoundarySpec& b);
core::Weight make_weight(const WeightSpec& w);
core::Problem make_problem(const ProblemConfig& c);

}  // namespace hslab::cli
