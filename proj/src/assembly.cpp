#include "eigcorr/assembly.hpp"

#include "eigcorr/error.hpp"

#include <cmath>
#include <string>

namespace eigcorr {

int stiffness_quadrature_degree(int order, const CoefficientField& diffusion) {
  return 2 * (order - 1) + diffusion.extra_degree();
}

int mass_quadrature_degree(int order, const CoefficientField& weight) {
  return 2 * order + weight.extra_degree();
}

int error_quadrature_degree(int order) { return 2 * order + 3; }

namespace {

double checked_coefficient(const CoefficientField& field, Point x) {
  const double v = field(x);
  if (!(v > 0.0)) {
    throw InvalidArgument("coefficient '" + field.name() + "' is not positive at (" +
                          std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
  }
  return v;
}

std::array<double, 2> physical_gradient(const std::array<double, 3>& dlam,
                                        const TriangleGeometry& g) {
  return {dlam[0] * g.grad_lambda[0][0] + dlam[1] * g.grad_lambda[1][0] + dlam[2] * g.grad_lambda[2][0],
          dlam[0] * g.grad_lambda[0][1] + dlam[1] * g.grad_lambda[1][1] + dlam[2] * g.grad_lambda[2][1]};
}

CsrMatrix scatter(const FeSpace& space, const std::vector<DenseMatrix>& locals) {
  const std::size_t local = space.dofs_per_cell();
  std::vector<Triplet> triplets;
  triplets.reserve(locals.size() * local * local);
  for (Index t = 0; t < locals.size(); ++t) {
    const auto dofs = space.cell_dofs(t);
    for (std::size_t i = 0; i < local; ++i) {
      for (std::size_t j = 0; j < local; ++j) {
        triplets.push_back({dofs[i], dofs[j], locals[t](i, j)});
      }
    }
  }
  return CsrMatrix::from_triplets(space.n_dofs(), space.n_dofs(), triplets);
}

} // namespace

DenseMatrix element_stiffness(const LagrangeElement& element, const TriangleGeometry& geometry,
                              const CoefficientField& diffusion,
                              std::span<const QuadraturePoint> rule) {
  const std::size_t n = element.size();
  DenseMatrix k(n, n);
  std::vector<std::array<double, 3>> dlam(n);
  std::vector<std::array<double, 2>> grad(n);
  for (const auto& q : rule) {
    const Barycentric lam{1.0 - q.xi - q.eta, q.xi, q.eta};
    element.barycentric_gradients(lam, dlam);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = physical_gradient(dlam[i], geometry);
    }
    const double w =
        q.weight * std::abs(geometry.jacobian) * checked_coefficient(diffusion, geometry.map(q.xi, q.eta));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        k(i, j) += w * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      k(i, j) = k(j, i);
    }
  }
  return k;
}

DenseMatrix element_mass(const LagrangeElement& element, const TriangleGeometry& geometry,
                         const CoefficientField& weight, std::span<const QuadraturePoint> rule) {
  const std::size_t n = element.size();
  DenseMatrix m(n, n);
  std::vector<double> phi(n);
  for (const auto& q : rule) {
    element.values({1.0 - q.xi - q.eta, q.xi, q.eta}, phi);
    const double w =
        q.weight * std::abs(geometry.jacobian) * checked_coefficient(weight, geometry.map(q.xi, q.eta));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        m(i, j) += w * phi[i] * phi[j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      m(i, j) = m(j, i);
    }
  }
  return m;
}

CsrMatrix assemble_stiffness(const FeSpace& space, const CoefficientField& diffusion) {
  const auto rule = triangle_rule(stiffness_quadrature_degree(space.order(), diffusion));
  std::vector<DenseMatrix> locals;
  locals.reserve(space.mesh().n_triangles());
  for (Index t = 0; t < space.mesh().n_triangles(); ++t) {
    locals.push_back(element_stiffness(space.element(), TriangleGeometry::of(space.mesh(), t),
                                       diffusion, rule));
  }
  return scatter(space, locals);
}

CsrMatrix assemble_mass(const FeSpace& space, const CoefficientField& weight) {
  const auto rule = triangle_rule(mass_quadrature_degree(space.order(), weight));
  std::vector<DenseMatrix> locals;
  locals.reserve(space.mesh().n_triangles());
  for (Index t = 0; t < space.mesh().n_triangles(); ++t) {
    locals.push_back(
        element_mass(space.element(), TriangleGeometry::of(space.mesh(), t), weight, rule));
  }
  return scatter(space, locals);
}

CsrMatrix apply_dirichlet(const CsrMatrix& matrix, const FeSpace& space) {
  if (matrix.n_rows() == space.n_free() && matrix.n_cols() == space.n_free() &&
      space.n_free() != space.n_dofs()) {
    return matrix;
  }
  if (matrix.n_rows() != space.n_dofs() || matrix.n_cols() != space.n_dofs()) {
    throw InvalidArgument("apply_dirichlet: matrix is neither full nor reduced for this space");
  }
  return matrix.submatrix(space.free_dofs(), space.free_dofs());
}

namespace {

// Number r >= 0 of regular refinements carrying `coarse` to `fine`, or throws.
int refinement_depth(const TriMesh& coarse, const TriMesh& fine) {
  const int depth = fine.generation - coarse.generation;
  if (depth < 0) {
    throw NestingViolation("prolongation: fine mesh is coarser than the coarse mesh");
  }
  Index factor = 1;
  for (int r = 0; r < depth; ++r) {
    factor *= 4;
  }
  if (fine.n_triangles() != coarse.n_triangles() * factor ||
      fine.n_vertices() < coarse.n_vertices()) {
    throw NestingViolation("prolongation: fine mesh is not a regular refinement of the coarse mesh");
  }
  for (Index v = 0; v < coarse.n_vertices(); ++v) {
    if (!(fine.vertices[v] == coarse.vertices[v])) {
      throw NestingViolation("prolongation: coarse vertices are not kept by the fine mesh");
    }
  }
  if (depth == 0) {
    if (fine.triangles != coarse.triangles) {
      throw NestingViolation("prolongation: meshes differ");
    }
    return 0;
  }
  // Fine vertices sit on the lattice of spacing 2^-depth in the barycentric
  // coordinates of their ancestor.
  const double lattice = static_cast<double>(1 << depth);
  for (Index t = 0; t < fine.n_triangles(); ++t) {
    const auto geom = TriangleGeometry::of(coarse, t / factor);
    for (Index v : fine.triangles[t]) {
      for (double l : geom.barycentric(fine.vertices[v])) {
        if (l < -1e-12 || l > 1.0 + 1e-12 || std::abs(l * lattice - std::round(l * lattice)) > 1e-9) {
          throw NestingViolation("prolongation: fine triangle " + std::to_string(t) +
                                 " is not a regular subdivision of its ancestor");
        }
      }
    }
  }
  return depth;
}

double snap(double v) {
  if (std::abs(v) < 1e-13) {
    return 0.0;
  }
  if (std::abs(v - 1.0) < 1e-13) {
    return 1.0;
  }
  return v;
}

} // namespace

CsrMatrix prolongation(const FeSpace& coarse, const FeSpace& fine) {
  if (fine.order() < coarse.order()) {
    throw NestingViolation("prolongation: fine order " + std::to_string(fine.order()) +
                           " is below coarse order " + std::to_string(coarse.order()));
  }
  const int depth = refinement_depth(coarse.mesh(), fine.mesh());
  Index factor = 1;
  for (int r = 0; r < depth; ++r) {
    factor *= 4;
  }

  std::vector<bool> done(fine.n_dofs(), false);
  std::vector<Triplet> triplets;
  std::vector<double> phi(coarse.dofs_per_cell());
  for (Index t = 0; t < fine.mesh().n_triangles(); ++t) {
    const Index parent = t / factor;
    const auto geom = TriangleGeometry::of(coarse.mesh(), parent);
    const auto coarse_dofs = coarse.cell_dofs(parent);
    for (Index dof : fine.cell_dofs(t)) {
      if (done[dof]) {
        continue;
      }
      done[dof] = true;
      coarse.element().values(geom.barycentric(fine.dof_coords()[dof]), phi);
      for (std::size_t i = 0; i < phi.size(); ++i) {
        if (const double v = snap(phi[i]); v != 0.0) {
          triplets.push_back({dof, coarse_dofs[i], v});
        }
      }
    }
  }
  return CsrMatrix::from_triplets(fine.n_dofs(), coarse.n_dofs(), triplets);
}

CsrMatrix reduce_prolongation(const CsrMatrix& full, const FeSpace& coarse, const FeSpace& fine) {
  if (full.n_rows() != fine.n_dofs() || full.n_cols() != coarse.n_dofs()) {
    throw InvalidArgument("reduce_prolongation: shape does not match the spaces");
  }
  return full.submatrix(fine.free_dofs(), coarse.free_dofs());
}

double integrate(const TriMesh& mesh, const ScalarFunction& f, int degree) {
  const auto rule = triangle_rule(degree);
  double sum = 0.0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto geom = TriangleGeometry::of(mesh, t);
    double local = 0.0;
    for (const auto& q : rule) {
      local += q.weight * f(geom.map(q.xi, q.eta));
    }
    sum += local * std::abs(geom.jacobian);
  }
  return sum;
}

namespace {

Vector full_coefficients(const FeSpace& space, std::span<const double> coeffs) {
  if (coeffs.size() == space.n_dofs()) {
    return Vector(coeffs.begin(), coeffs.end());
  }
  if (coeffs.size() == space.n_free()) {
    return space.extend(coeffs);
  }
  throw InvalidArgument("coefficient vector matches neither all nor free dofs");
}

} // namespace

double l2_error(const FeSpace& space, std::span<const double> coeffs, const ScalarFunction& f,
                int degree) {
  const Vector u = full_coefficients(space, coeffs);
  const auto rule = triangle_rule(degree < 0 ? error_quadrature_degree(space.order()) : degree);
  std::vector<double> phi(space.dofs_per_cell());
  double sum = 0.0;
  for (Index t = 0; t < space.mesh().n_triangles(); ++t) {
    const auto geom = TriangleGeometry::of(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    double local = 0.0;
    for (const auto& q : rule) {
      space.element().values({1.0 - q.xi - q.eta, q.xi, q.eta}, phi);
      double uh = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        uh += u[dofs[i]] * phi[i];
      }
      const double diff = uh - f(geom.map(q.xi, q.eta));
      local += q.weight * diff * diff;
    }
    sum += local * std::abs(geom.jacobian);
  }
  return std::sqrt(sum);
}

double energy_error(const FeSpace& space, std::span<const double> coeffs,
                    const GradientFunction& grad_f, int degree) {
  const Vector u = full_coefficients(space, coeffs);
  const auto rule = triangle_rule(degree < 0 ? error_quadrature_degree(space.order()) : degree);
  std::vector<std::array<double, 3>> dlam(space.dofs_per_cell());
  double sum = 0.0;
  for (Index t = 0; t < space.mesh().n_triangles(); ++t) {
    const auto geom = TriangleGeometry::of(space.mesh(), t);
    const auto dofs = space.cell_dofs(t);
    double local = 0.0;
    for (const auto& q : rule) {
      space.element().barycentric_gradients({1.0 - q.xi - q.eta, q.xi, q.eta}, dlam);
      std::array<double, 2> g{0.0, 0.0};
      for (std::size_t i = 0; i < dlam.size(); ++i) {
        const auto gi = physical_gradient(dlam[i], geom);
        g[0] += u[dofs[i]] * gi[0];
        g[1] += u[dofs[i]] * gi[1];
      }
      const auto exact = grad_f(geom.map(q.xi, q.eta));
      local += q.weight * ((g[0] - exact[0]) * (g[0] - exact[0]) + (g[1] - exact[1]) * (g[1] - exact[1]));
    }
    sum += local * std::abs(geom.jacobian);
  }
  return std::sqrt(sum);
}

} // namespace eigcorr
