#pragma once

#include <span>
#include <vector>

#include "hslab/core/problem.hpp"

namespace hslab::lab {

struct Resolution {
  int nx = 800;      // x quadrature nodes
  int ny = 1600;     // y cells
  int x_order = 4;   // Gauss points per x panel

  Resolution doubled() const { return {2 * nx, 2 * ny, x_order}; }
};

inline constexpr int kMaxNx = 4000;
inline constexpr int kMaxNy = 8000;

struct DiscretizeOptions {
  Resolution res{};
  // Extra x panel ends and y cell ends inside the window.
  std::vector<double> x_breaks;
  std::vector<double> y_breaks;
  bool parallel = true;
  // Fill the matrix with the plain double loop instead of the row-range kernel.
  bool serial_reference = false;
};

// Matrix of the operator restricted to x in [t_lo, t_hi] at p = 2:
//   M_ij = sqrt(ω_i) w(x_i) · 1[a(x_i) <= y_j <= b(x_i)] · (∫_{Y_j} v) / sqrt(τ_j)
// with Gauss nodes x_i (weights ω_i) and y cells Y_j of length τ_j whose ends
// include every a(x_i) and b(x_i), so the indicator is exact on each cell.
struct DiscreteOperator {
  double t_lo = 0.0, t_hi = 0.0;
  Resolution res{};
  std::vector<double> x, omega;
  std::vector<double> y_breaks;   // cols() + 1 cell ends
  std::vector<double> y, tau;     // cell midpoints and lengths
  std::vector<double> row_scale;  // sqrt(ω_i) w(x_i)
  std::vector<double> col_scale;  // (∫_{Y_j} v) / sqrt(τ_j)
  std::vector<int> col_begin, col_end;  // nonzero columns of row i: [begin, end)
  std::vector<double> matrix;     // row-major rows() x cols()

  int rows() const { return static_cast<int>(x.size()); }
  int cols() const { return static_cast<int>(y.size()); }
  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * y.size() + static_cast<std::size_t>(j)]; }
};

// ConfigError unless p = 2 and the resolution is within the caps.
DiscreteOperator discretize(const core::Problem& problem, double t_lo, double t_hi,
                            const DiscretizeOptions& opt = {});

// All singular values of a dense row-major m x n matrix, nonincreasing.
// ConvergenceError if LAPACK reports failure or the input is not finite.
std::vector<double> singular_values(std::span<const double> a, int m, int n);

struct SpectralReport {
  std::vector<double> s;
  int rows = 0, cols = 0;
  // Against the same operator at doubled resolution, when requested.
  bool compared = false;
  double max_rel_change = 0.0;  // over the first `compare_count` values
  int compare_count = 0;
};

SpectralReport spectrum(const DiscreteOperator& op);

// Spectrum at `res` plus the relative change of s_1..s_count at 2·res.
SpectralReport spectrum_with_refinement(const core::Problem& problem, double t_lo, double t_hi,
                                        const DiscretizeOptions& opt, int count = 10);

}  // namespace hslab::lab
