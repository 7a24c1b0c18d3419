#pragma once

#include <vector>

namespace eigcorr {

struct QuadraturePoint {
  double xi;
  double eta;
  double weight;
};

/// n-point Gauss-Legendre rule on [0, 1] as (node, weight) pairs.
std::vector<QuadraturePoint> gauss_legendre_unit(int n);

/// Rule on the reference triangle (0,0), (1,0), (0,1), exact for polynomials of
/// total degree <= `degree`; weights sum to 1/2. Built as a collapsed
/// (Duffy) tensor product of Gauss-Legendre rules.
std::vector<QuadraturePoint> triangle_rule(int degree);

} // namespace eigcorr
