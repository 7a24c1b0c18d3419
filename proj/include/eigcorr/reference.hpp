#pragma once

#include "eigcorr/assembly.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eigcorr {

/// Exact eigenvalue, optionally with its b-normalised eigenfunction.
struct ExactEigenpair {
  double lambda = 0.0;
  ScalarFunction u;
  GradientFunction grad;
  std::string label;

  bool has_function() const { return static_cast<bool>(u) && static_cast<bool>(grad); }
};

/// Mode (j, k) of the Dirichlet Laplacian on the unit square with constant
/// coefficients: lambda = (diffusion / weight) (j^2 + k^2) pi^2 and
/// u = 2 sin(j pi x) sin(k pi y) / sqrt(weight).
ExactEigenpair analytic_reference(int j, int k, double diffusion = 1.0, double weight = 1.0);

/// Modes of the unit square sorted by j^2 + k^2 (then j), repeated by
/// multiplicity; entry i-1 is the i-th eigenvalue.
std::pair<int, int> unit_square_mode(int index);

/// Multiplicity of the index-th unit-square eigenvalue.
int unit_square_multiplicity(int index);

/// Reference for the index-th eigenpair on the unit square. The eigenfunction
/// is only attached when the eigenvalue is simple.
ExactEigenpair unit_square_reference(int index, double diffusion = 1.0, double weight = 1.0);

struct RateEstimate {
  std::optional<double> slope;
  /// An error entry was zero or negative (machine-precision floor).
  bool saturated = false;
};

/// slope_k = ln(e_{k-1}/e_k) / ln(s_{k-1}/s_k) for k = 1..n-1.
std::vector<RateEstimate> estimate_rates(std::span<const double> errors,
                                         std::span<const double> sizes);

} // namespace eigcorr
