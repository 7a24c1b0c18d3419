#pragma once

#include <array>
#include <span>
#include <vector>

namespace eigcorr {

using Barycentric = std::array<double, 3>;

/// Lagrange element of order p on a triangle, written in barycentric
/// coordinates. Nodes are the points alpha / p with alpha a multi-index
/// summing to p.
///
/// Local ordering: the three vertices, then the p-1 interior nodes of each
/// edge (v0->v1, v1->v2, v2->v0) walking from the first endpoint to the
/// second, then cell-interior nodes.
class LagrangeElement {
public:
  explicit LagrangeElement(int order);

  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<std::array<int, 3>>& nodes() const { return nodes_; }

  Barycentric node(std::size_t i) const;

  void values(const Barycentric& lambda, std::span<double> out) const;
  /// d phi_i / d lambda_j for j = 0, 1, 2.
  void barycentric_gradients(const Barycentric& lambda, std::span<std::array<double, 3>> out) const;

private:
  int order_;
  std::vector<std::array<int, 3>> nodes_;
};

} // namespace eigcorr
