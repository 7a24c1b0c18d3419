#pragma once

#include "eigcorr/csr_matrix.hpp"
#include "eigcorr/fe_space.hpp"
#include "eigcorr/quadrature.hpp"

#include <array>
#include <functional>
#include <span>

namespace eigcorr {

using ScalarFunction = std::function<double(Point)>;
using GradientFunction = std::function<std::array<double, 2>(Point)>;

int stiffness_quadrature_degree(int order, const CoefficientField& diffusion);
int mass_quadrature_degree(int order, const CoefficientField& weight);
/// Degree used for error norms against smooth non-polynomial functions.
int error_quadrature_degree(int order);

/// Local matrix of int a grad(phi_i) . grad(phi_j) over one triangle.
DenseMatrix element_stiffness(const LagrangeElement& element, const TriangleGeometry& geometry,
                              const CoefficientField& diffusion,
                              std::span<const QuadraturePoint> rule);

/// Local matrix of int rho phi_i phi_j over one triangle.
DenseMatrix element_mass(const LagrangeElement& element, const TriangleGeometry& geometry,
                         const CoefficientField& weight, std::span<const QuadraturePoint> rule);

/// Stiffness matrix over all dofs (Dirichlet rows included). Elements are
/// visited in index order so equal inputs give bit-identical output.
CsrMatrix assemble_stiffness(const FeSpace& space, const CoefficientField& diffusion = CoefficientField{});

/// Mass matrix over all dofs.
CsrMatrix assemble_mass(const FeSpace& space, const CoefficientField& weight = CoefficientField{});

/// Restriction of a full-space matrix to free x free dofs. A matrix that is
/// already n_free x n_free is returned unchanged.
CsrMatrix apply_dirichlet(const CsrMatrix& matrix, const FeSpace& space);

/// Nodal interpolation of the coarse basis at the fine Lagrange nodes, so
/// P c holds the fine coefficients of the coarse function with coefficients c.
/// Requires fine.order >= coarse.order and the fine mesh to be the coarse
/// mesh refined regularly zero or more times; throws NestingViolation
/// otherwise. Rows and columns cover all dofs.
CsrMatrix prolongation(const FeSpace& coarse, const FeSpace& fine);

/// Free-dof block of a full prolongation.
CsrMatrix reduce_prolongation(const CsrMatrix& full, const FeSpace& coarse, const FeSpace& fine);

/// Integral of f over the mesh with a rule of the given degree.
double integrate(const TriMesh& mesh, const ScalarFunction& f, int degree);

/// ||u_h - f||_{L2}. Coefficients may be full-length or free-dof only.
/// degree < 0 selects error_quadrature_degree(order).
double l2_error(const FeSpace& space, std::span<const double> coeffs, const ScalarFunction& f,
                int degree = -1);

/// ||grad(u_h - f)||_{L2} given the exact gradient.
double energy_error(const FeSpace& space, std::span<const double> coeffs,
                    const GradientFunction& grad_f, int degree = -1);

} // namespace eigcorr
