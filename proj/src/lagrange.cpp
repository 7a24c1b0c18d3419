#include "eigcorr/lagrange.hpp"

#include "eigcorr/error.hpp"

#include <cassert>
#include <string>

namespace eigcorr {

namespace {

// Silvester's factor prod_{k<a} (p s - k) / (k + 1) and its derivative in s.
void silvester(int p, int a, double s, double& value, double& deriv) {
  value = 1.0;
  deriv = 0.0;
  for (int k = 0; k < a; ++k) {
    const double factor = (p * s - k) / (k + 1);
    const double dfactor = static_cast<double>(p) / (k + 1);
    deriv = deriv * factor + value * dfactor;
    value *= factor;
  }
}

} // namespace

LagrangeElement::LagrangeElement(int order) : order_(order) {
  if (order < 1 || order > 3) {
    throw InvalidArgument("LagrangeElement: order must be 1, 2 or 3, got " + std::to_string(order));
  }
  const int p = order;
  nodes_ = {{p, 0, 0}, {0, p, 0}, {0, 0, p}};
  const std::array<std::array<int, 2>, 3> local_edges{{{0, 1}, {1, 2}, {2, 0}}};
  for (const auto& [a, b] : local_edges) {
    for (int t = 1; t < p; ++t) {
      std::array<int, 3> alpha{0, 0, 0};
      alpha[a] = p - t;
      alpha[b] = t;
      nodes_.push_back(alpha);
    }
  }
  for (int i = 1; i < p; ++i) {
    for (int j = 1; i + j < p; ++j) {
      nodes_.push_back({p - i - j, i, j});
    }
  }
}

Barycentric LagrangeElement::node(std::size_t i) const {
  const auto& a = nodes_[i];
  return {static_cast<double>(a[0]) / order_, static_cast<double>(a[1]) / order_,
          static_cast<double>(a[2]) / order_};
}

void LagrangeElement::values(const Barycentric& lambda, std::span<double> out) const {
  assert(out.size() == nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double v = 1.0;
    for (int j = 0; j < 3; ++j) {
      double f, df;
      silvester(order_, nodes_[i][j], lambda[j], f, df);
      v *= f;
    }
    out[i] = v;
  }
}

void LagrangeElement::barycentric_gradients(const Barycentric& lambda,
                                            std::span<std::array<double, 3>> out) const {
  assert(out.size() == nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::array<double, 3> f{}, df{};
    for (int j = 0; j < 3; ++j) {
      silvester(order_, nodes_[i][j], lambda[j], f[j], df[j]);
    }
    out[i] = {df[0] * f[1] * f[2], f[0] * df[1] * f[2], f[0] * f[1] * df[2]};
  }
}

} // namespace eigcorr
