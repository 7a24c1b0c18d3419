#include "eigcorr/fe_space.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <cassert>

namespace eigcorr {

FeSpace::FeSpace(std::shared_ptr<const TriMesh> mesh, int order)
    : mesh_(std::move(mesh)), element_(order) {
  if (!mesh_) {
    throw InvalidArgument("FeSpace: null mesh");
  }
  edges_ = build_edges(*mesh_);
  const Index nv = mesh_->n_vertices();
  const Index ne = edges_.edges.size();
  const Index nt = mesh_->n_triangles();
  const Index p = static_cast<Index>(order);
  const Index per_edge = p - 1;
  const Index per_cell = (p - 1) * (p - 2) / 2;
  const Index edge_base = nv;
  const Index cell_base = nv + ne * per_edge;
  const Index n = cell_base + nt * per_cell;

  dof_coords_.resize(n);
  std::copy(mesh_->vertices.begin(), mesh_->vertices.end(), dof_coords_.begin());
  for (Index e = 0; e < ne; ++e) {
    const Point a = mesh_->vertices[edges_.edges[e][0]];
    const Point b = mesh_->vertices[edges_.edges[e][1]];
    for (Index g = 0; g < per_edge; ++g) {
      const double s = static_cast<double>(g + 1) / static_cast<double>(p);
      dof_coords_[edge_base + e * per_edge + g] = {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
    }
  }

  const std::size_t local = element_.size();
  cell_dofs_.resize(nt * local);
  for (Index t = 0; t < nt; ++t) {
    const auto& tri = mesh_->triangles[t];
    Index* dofs = cell_dofs_.data() + t * local;
    std::size_t slot = 0;
    for (int j = 0; j < 3; ++j) {
      dofs[slot++] = tri[j];
    }
    for (int j = 0; j < 3; ++j) {
      const Index e = edges_.triangle_edges[t][j];
      const bool forward = tri[j] == edges_.edges[e][0];
      for (Index step = 1; step < p; ++step) {
        const Index g = forward ? step - 1 : p - 1 - step;
        dofs[slot++] = edge_base + e * per_edge + g;
      }
    }
    const auto geom = TriangleGeometry::of(*mesh_, t);
    for (Index k = 0; k < per_cell; ++k, ++slot) {
      const Index dof = cell_base + t * per_cell + k;
      dofs[slot] = dof;
      const Barycentric lam = element_.node(slot);
      dof_coords_[dof] = geom.map(lam[1], lam[2]);
    }
    assert(slot == local);
  }

  dirichlet_.assign(n, false);
  for (const auto& be : mesh_->boundary_edges) {
    const Edge key = be[0] < be[1] ? be : Edge{be[1], be[0]};
    const auto it = std::lower_bound(edges_.edges.begin(), edges_.edges.end(), key);
    if (it == edges_.edges.end() || *it != key) {
      throw InvalidArgument("FeSpace: boundary edge is not an edge of the mesh");
    }
    const Index e = static_cast<Index>(it - edges_.edges.begin());
    dirichlet_[key[0]] = true;
    dirichlet_[key[1]] = true;
    for (Index g = 0; g < per_edge; ++g) {
      dirichlet_[edge_base + e * per_edge + g] = true;
    }
  }

  free_index_.assign(n, kNoIndex);
  for (Index i = 0; i < n; ++i) {
    if (!dirichlet_[i]) {
      free_index_[i] = free_dofs_.size();
      free_dofs_.push_back(i);
    }
  }
}

Vector FeSpace::interpolate(const std::function<double(Point)>& f) const {
  Vector v(n_dofs());
  for (Index i = 0; i < n_dofs(); ++i) {
    v[i] = f(dof_coords_[i]);
  }
  return v;
}

Vector FeSpace::extend(std::span<const double> free_values) const {
  if (free_values.size() != n_free()) {
    throw InvalidArgument("FeSpace::extend: expected " + std::to_string(n_free()) + " values");
  }
  Vector full(n_dofs(), 0.0);
  for (Index k = 0; k < free_dofs_.size(); ++k) {
    full[free_dofs_[k]] = free_values[k];
  }
  return full;
}

Vector FeSpace::restrict_to_free(std::span<const double> values) const {
  if (values.size() != n_dofs()) {
    throw InvalidArgument("FeSpace::restrict_to_free: expected " + std::to_string(n_dofs()) +
                          " values");
  }
  Vector out(n_free());
  for (Index k = 0; k < free_dofs_.size(); ++k) {
    out[k] = values[free_dofs_[k]];
  }
  return out;
}

double FeSpace::evaluate(std::span<const double> coeffs, Index triangle,
                         const Barycentric& lambda) const {
  std::vector<double> phi(dofs_per_cell());
  element_.values(lambda, phi);
  const auto dofs = cell_dofs(triangle);
  double s = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    s += coeffs[dofs[i]] * phi[i];
  }
  return s;
}

TriangleGeometry TriangleGeometry::of(const TriMesh& mesh, Index triangle) {
  const auto& tri = mesh.triangles[triangle];
  return of({mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]});
}

TriangleGeometry TriangleGeometry::of(const std::array<Point, 3>& v) {
  TriangleGeometry g;
  g.vertices = v;
  g.jacobian = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
  const double inv = 1.0 / g.jacobian;
  g.grad_lambda[0] = {(v[1].y - v[2].y) * inv, (v[2].x - v[1].x) * inv};
  g.grad_lambda[1] = {(v[2].y - v[0].y) * inv, (v[0].x - v[2].x) * inv};
  g.grad_lambda[2] = {(v[0].y - v[1].y) * inv, (v[1].x - v[0].x) * inv};
  return g;
}

Point TriangleGeometry::map(double xi, double eta) const {
  return {vertices[0].x + xi * (vertices[1].x - vertices[0].x) + eta * (vertices[2].x - vertices[0].x),
          vertices[0].y + xi * (vertices[1].y - vertices[0].y) + eta * (vertices[2].y - vertices[0].y)};
}

Barycentric TriangleGeometry::barycentric(Point p) const {
  const Point& a = vertices[0];
  const Point& b = vertices[1];
  const Point& c = vertices[2];
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / jacobian;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / jacobian;
  return {1.0 - l1 - l2, l1, l2};
}

CoefficientField::CoefficientField(double value, std::string name)
    : value_(value), name_(name.empty() ? std::to_string(value) : std::move(name)) {
  if (!(value > 0.0)) {
    throw InvalidArgument("CoefficientField: constant must be positive");
  }
}

CoefficientField::CoefficientField(std::function<double(Point)> f, int extra_degree, std::string name)
    : f_(std::move(f)), extra_degree_(extra_degree), name_(std::move(name)) {
  if (!f_) {
    throw InvalidArgument("CoefficientField: empty function");
  }
  if (extra_degree < 0) {
    throw InvalidArgument("CoefficientField: negative extra degree");
  }
}

} // namespace eigcorr
