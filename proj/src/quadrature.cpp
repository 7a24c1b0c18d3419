#include "eigcorr/quadrature.hpp"

#include "eigcorr/error.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace eigcorr {

namespace {

// Legendre polynomial P_n(x) and its derivative.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

} // namespace

std::vector<QuadraturePoint> gauss_legendre_unit(int n) {
  if (n < 1) {
    throw InvalidArgument("gauss_legendre_unit: need at least one point");
  }
  std::vector<QuadraturePoint> rule(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<std::size_t>(i)] = {0.5 * (x + 1.0), 0.0, 0.5 * w};
  }
  return rule;
}

std::vector<QuadraturePoint> triangle_rule(int degree) {
  if (degree < 0) {
    throw InvalidArgument("triangle_rule: negative degree");
  }
  // Degree d in (xi, eta) becomes degree <= d + 1 per direction after the
  // collapse, so n Gauss points with 2n - 1 >= d + 1 suffice.
  const int n = (degree + 3) / 2;
  const auto line = gauss_legendre_unit(n);
  std::vector<QuadraturePoint> rule;
  rule.reserve(line.size() * line.size());
  for (const auto& u : line) {
    for (const auto& v : line) {
      rule.push_back({u.xi * (1.0 - v.xi), v.xi, u.weight * v.weight * (1.0 - v.xi)});
    }
  }
  return rule;
}

} // namespace eigcorr
