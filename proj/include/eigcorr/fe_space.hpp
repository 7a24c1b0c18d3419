#pragma once

#include "eigcorr/dense.hpp"
#include "eigcorr/lagrange.hpp"
#include "eigcorr/mesh.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace eigcorr {

inline constexpr Index kNoIndex = static_cast<Index>(-1);

/// Continuous Lagrange space of order 1..3 over a TriMesh with homogeneous
/// Dirichlet conditions on the mesh boundary.
///
/// Global numbering: vertex dofs [0, nv), then p-1 dofs per edge in edge-table
/// order (walking from the lower to the higher vertex index), then the
/// interior dofs of each triangle.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const TriMesh> mesh, int order);
  FeSpace(const TriMesh& mesh, int order) : FeSpace(std::make_shared<const TriMesh>(mesh), order) {}

  const TriMesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const TriMesh>& mesh_ptr() const { return mesh_; }
  const EdgeTable& edges() const { return edges_; }
  const LagrangeElement& element() const { return element_; }
  int order() const { return element_.order(); }

  Index n_dofs() const { return dof_coords_.size(); }
  Index n_free() const { return free_dofs_.size(); }
  std::size_t dofs_per_cell() const { return element_.size(); }

  std::span<const Point> dof_coords() const { return dof_coords_; }
  std::span<const Index> cell_dofs(Index triangle) const {
    return {cell_dofs_.data() + triangle * dofs_per_cell(), dofs_per_cell()};
  }
  const std::vector<bool>& dirichlet_mask() const { return dirichlet_; }
  std::span<const Index> free_dofs() const { return free_dofs_; }
  /// Position of a dof in `free_dofs`, or kNoIndex for Dirichlet dofs.
  Index free_index(Index dof) const { return free_index_[dof]; }

  /// Nodal interpolant over all dofs.
  Vector interpolate(const std::function<double(Point)>& f) const;
  /// Full-length vector with zeros on Dirichlet dofs.
  Vector extend(std::span<const double> free_values) const;
  Vector restrict_to_free(std::span<const double> values) const;

  /// Evaluates a function given by full-length coefficients at barycentric
  /// point `lambda` of `triangle`.
  double evaluate(std::span<const double> coeffs, Index triangle, const Barycentric& lambda) const;

private:
  std::shared_ptr<const TriMesh> mesh_;
  LagrangeElement element_;
  EdgeTable edges_;
  std::vector<Point> dof_coords_;
  std::vector<Index> cell_dofs_;
  std::vector<bool> dirichlet_;
  std::vector<Index> free_dofs_;
  std::vector<Index> free_index_;
};

/// Geometry of one triangle: vertices and barycentric gradients.
struct TriangleGeometry {
  std::array<Point, 3> vertices;
  std::array<std::array<double, 2>, 3> grad_lambda;
  /// Twice the signed area, the Jacobian of the reference map.
  double jacobian;

  static TriangleGeometry of(const TriMesh& mesh, Index triangle);
  static TriangleGeometry of(const std::array<Point, 3>& vertices);
  Point map(double xi, double eta) const;
  Barycentric barycentric(Point p) const;
};

/// Scalar coefficient field, strictly positive.
class CoefficientField {
public:
  /// A constant field.
  explicit CoefficientField(double value = 1.0, std::string name = {});
  /// A general field. `extra_degree` is added to quadrature degrees when
  /// integrating against it (0 means it is treated as piecewise constant).
  CoefficientField(std::function<double(Point)> f, int extra_degree, std::string name);

  double operator()(Point p) const { return f_ ? f_(p) : value_; }
  bool is_constant() const { return !f_; }
  double constant_value() const { return value_; }
  int extra_degree() const { return extra_degree_; }
  const std::string& name() const { return name_; }

private:
  std::function<double(Point)> f_;
  double value_ = 1.0;
  int extra_degree_ = 0;
  std::string name_;
};

} // namespace eigcorr
