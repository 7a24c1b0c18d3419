#include "eigcorr/correction.hpp"
#include "eigcorr/error.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace eigcorr;

namespace {

const double kLambda1 = 2.0 * std::numbers::pi * std::numbers::pi;

double direct_first(int m, int order = 1) {
  const Hierarchy h = Hierarchy::build(Way::multigrid, m, 1, order);
  return solve_coarse(h, 1).value;
}

double max_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
    }
  }
  return d;
}

} // namespace

TEST_CASE("hierarchy shapes") {
  const Hierarchy mg = Hierarchy::build(Way::multigrid, 4, 2);
  REQUIRE(mg.n_levels() == 2);
  CHECK(mg.level(0).subdivisions == 4);
  CHECK(mg.level(1).subdivisions == 16);
  CHECK(mg.level(1).space.mesh().n_triangles() == 2u * 16 * 16);
  CHECK(mg.level(1).space.order() == 1);

  const Hierarchy ms = Hierarchy::build(Way::multispace, 8, 3);
  REQUIRE(ms.n_levels() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(ms.level(k).space.order() == static_cast<int>(k) + 1);
    CHECK(ms.level(k).space.mesh_ptr() == ms.level(0).space.mesh_ptr());
  }

  const Hierarchy one = Hierarchy::build(Way::multigrid, 3, 1);
  CHECK(one.n_levels() == 1);
  CHECK(one.coarse().coarse_stiffness.rows() == 0);

  CHECK_THROWS_AS(Hierarchy::build(Way::multigrid, 3, 2), UnsupportedLadder);
  CHECK_THROWS_AS(Hierarchy::build(Way::multigrid, 1, 2), UnsupportedLadder);
  CHECK_THROWS_AS(Hierarchy::build(Way::multispace, 4, 4), InvalidArgument);
  CHECK_THROWS_AS(Hierarchy::build(Way::multispace, 4, 2, 3), InvalidArgument);
  CHECK(parse_way("multispace") == Way::multispace);
  CHECK_THROWS_AS(parse_way("bogus"), InvalidArgument);
}

TEST_CASE("hierarchy prolongations compose and satisfy the Galerkin identity") {
  for (Way way : {Way::multigrid, Way::multispace}) {
    const Hierarchy h = Hierarchy::build(way, 2, 3);
    for (std::size_t k = 1; k < h.n_levels(); ++k) {
      const Level& lv = h.level(k);
      const CsrMatrix composed = multiply(lv.prolong_step, h.level(k - 1).prolong_coarse);
      CHECK(max_abs_difference(composed, lv.prolong_coarse) <= 1e-12);
      CHECK(max_diff(lv.coarse_stiffness, h.coarse().stiffness.to_dense()) <= 1e-11);
      CHECK(max_diff(lv.coarse_mass, h.coarse().mass.to_dense()) <= 1e-11);
      CHECK(max_diff(galerkin_product(lv.stiffness, lv.prolong_step),
                     h.level(k - 1).stiffness.to_dense()) <= 1e-11);
    }
  }
}

TEST_CASE("coarse solve") {
  const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 2);
  const EigenPair p = solve_coarse(h, 1);
  CHECK(p.value >= kLambda1);
  CHECK(std::abs(h.coarse().mass.bilinear(p.vector, p.vector) - 1.0) <= 1e-12);
  const auto ref = oracle::eigenvalues(h.coarse().stiffness, h.coarse().mass);
  CHECK(std::abs(p.value - ref[0]) <= 1e-9 * ref[0]);
  const EigenPair p3 = solve_coarse(h, 3);
  CHECK(std::abs(p3.value - ref[2]) <= 1e-9 * ref[2]);
  CHECK_THROWS_AS(solve_coarse(h, 0), InvalidArgument);
  CHECK_THROWS_AS(solve_coarse(h, 10), InvalidArgument);
}

TEST_CASE("source correction") {
  SUBCASE("equal spaces and an exact eigenpair give a fixed point") {
    const FeSpace s(unit_square_mesh(6), 2);
    const Hierarchy h = Hierarchy::from_spaces({s, s}, Way::multigrid);
    const EigenPair p = solve_coarse(h, 1);
    const Vector ut = source_correction(h, 0, p);
    Vector d = ut;
    axpy(-1.0, p.vector, d);
    CHECK(norm_inf(d) <= 1e-10);
  }
  SUBCASE("residual contract and improvement over the prolonged coarse function") {
    const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 2);
    const EigenPair p = solve_coarse(h, 1);
    const Vector ut = source_correction(h, 0, p);
    const Level& fine = h.level(1);
    const Vector w = fine.prolong_step * p.vector;
    Vector rhs = fine.mass * w;
    scale(p.value, rhs);
    Vector res = fine.stiffness * ut;
    axpy(-1.0, rhs, res);
    CHECK(norm2(res) <= 1e-12 * norm2(rhs));

    const ExactEigenpair ref = analytic_reference(1, 1);
    auto aligned = [&](Vector v) {
      Vector full = fine.space.extend(v);
      if (dot(full, fine.space.interpolate(ref.u)) < 0.0) {
        scale(-1.0, full);
      }
      return full;
    };
    const double err_tilde = energy_error(fine.space, aligned(ut), ref.grad);
    const double err_coarse = energy_error(fine.space, aligned(w), ref.grad);
    CHECK(err_tilde < err_coarse);
  }
}

TEST_CASE("augmented eigensolve") {
  const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 2);
  const EigenPair coarse = solve_coarse(h, 1);
  const Level& fine = h.level(1);

  SUBCASE("augmenting with a coarse function adds nothing") {
    const Vector inside = fine.prolong_step * coarse.vector;
    try {
      const EigenPair p = augmented_eigensolve(h, 1, inside, 1);
      CHECK(std::abs(p.value - coarse.value) <= 1e-10 * coarse.value);
    } catch (const DegenerateAugmentation&) {
      CHECK(true);
    }
    CHECK_THROWS_AS(augmented_eigensolve(h, 1, Vector(fine.space.n_free(), 0.0), 1),
                    DegenerateAugmentation);
  }
  SUBCASE("min-max sandwich and normalisation") {
    const Vector ut = source_correction(h, 0, coarse);
    const EigenPair p = augmented_eigensolve(h, 1, ut, 1);
    const double fine_direct = smallest_eigenpairs(fine.stiffness, fine.mass, 1).front().value;
    CHECK(fine_direct <= p.value);
    CHECK(p.value <= coarse.value);
    CHECK(p.value >= kLambda1);
    CHECK(std::abs(fine.mass.bilinear(p.vector, p.vector) - 1.0) <= 1e-12);
    CHECK(std::abs(rayleigh_quotient(fine.stiffness, fine.mass, p.vector) - p.value) <= 1e-10 * p.value);

    SolverOptions closest;
    closest.selection = EigenSelection::closest_to_previous;
    const EigenPair q = augmented_eigensolve(h, 1, ut, 1, closest, coarse.value);
    CHECK(q.value == p.value);
  }
  SUBCASE("argument checks") {
    CHECK_THROWS_AS(augmented_eigensolve(h, 0, coarse.vector, 1), InvalidArgument);
    CHECK_THROWS_AS(augmented_eigensolve(h, 1, coarse.vector, 1), InvalidArgument);
    CHECK_THROWS_AS(augmented_eigensolve(h, 2, coarse.vector, 1), InvalidArgument);
  }
}

TEST_CASE("one correction step") {
  const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 2);
  const EigenPair coarse = solve_coarse(h, 1);
  const EigenPair step = one_correction_step(h, 0, coarse, 1);
  const EigenPair composed = augmented_eigensolve(h, 1, source_correction(h, 0, coarse), 1, {}, coarse.value);
  CHECK(step.value == composed.value);
  CHECK(step.vector == composed.vector);
  CHECK(step.value >= kLambda1);
  CHECK(std::abs(step.value - kLambda1) <= 2.0 * std::abs(direct_first(16) - kLambda1));
}

TEST_CASE("multi-level solve") {
  const ExactEigenpair ref = unit_square_reference(1);

  SUBCASE("one level is the coarse solve") {
    const Hierarchy h = Hierarchy::build(Way::multigrid, 8, 1);
    const MultiLevelResult r = multi_level_solve(h, 1, {}, &ref);
    const EigenPair c = solve_coarse(h, 1);
    CHECK(r.pair.value == c.value);
    CHECK(r.pair.vector == c.vector);
    REQUIRE(r.trace.records.size() == 1);
    CHECK(r.trace.records[0].stage == "coarse");
  }
  SUBCASE("three multigrid levels from H = 1/4") {
    const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 3);
    const MultiLevelResult r = multi_level_solve(h, 1, {}, &ref);
    REQUIRE(r.trace.records.size() == 3);
    CHECK(r.trace.records[1].stage == "correction");
    CHECK(r.trace.records[2].stage == "final");
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(r.trace.records[k].lambda >= kLambda1);
      CHECK(r.trace.records[k].err_energy.has_value());
      if (k > 0) {
        CHECK(r.trace.records[k].dofs > r.trace.records[k - 1].dofs);
      }
    }
    CHECK(r.pair.value == r.trace.records.back().lambda);
    CHECK(std::abs(r.pair.value - kLambda1) <= 2.0 * std::abs(direct_first(64) - kLambda1));
    CHECK(std::abs(h.finest().mass.bilinear(r.pair.vector, r.pair.vector) - 1.0) <= 1e-12);
  }
  SUBCASE("equal levels return the coarse eigenpair") {
    const FeSpace s(unit_square_mesh(6), 1);
    const Hierarchy h = Hierarchy::from_spaces({s, s, s}, Way::multigrid);
    const MultiLevelResult r = multi_level_solve(h, 1);
    const EigenPair c = solve_coarse(h, 1);
    CHECK(std::abs(r.pair.value - c.value) <= 1e-10 * c.value);
    REQUIRE(r.trace.records.size() == 3);
  }
  SUBCASE("two levels equal the two-grid baseline") {
    const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 2);
    const MultiLevelResult a = multi_level_solve(h, 1);
    const MultiLevelResult b = two_grid_solve(h, 1);
    CHECK(a.pair.value == b.pair.value);
    CHECK(a.pair.vector == b.pair.vector);
  }
  SUBCASE("two-grid skips intermediate levels") {
    const Hierarchy h = Hierarchy::build(Way::multigrid, 4, 3);
    const MultiLevelResult tg = two_grid_solve(h, 1, {}, &ref);
    REQUIRE(tg.trace.records.size() == 2);
    CHECK(tg.trace.records[1].level == 2);
    CHECK(tg.pair.value >= kLambda1);
    // The multi-level scheme is more accurate on the same finest space.
    CHECK(multi_level_solve(h, 1).pair.value < tg.pair.value);
  }
  SUBCASE("multiple eigenvalues carry only the eigenvalue error") {
    const ExactEigenpair ref2 = unit_square_reference(2);
    CHECK_FALSE(ref2.has_function());
    const Hierarchy h = Hierarchy::build(Way::multispace, 4, 2);
    const MultiLevelResult r = multi_level_solve(h, 2, {}, &ref2);
    CHECK(r.trace.records.back().err_lambda.has_value());
    CHECK_FALSE(r.trace.records.back().err_energy.has_value());
    CHECK(std::abs(r.pair.value - ref2.lambda) < 0.05 * ref2.lambda);
  }
}

TEST_CASE("Rayleigh quotient expansion identity") {
  const Hierarchy h = Hierarchy::build(Way::multigrid, 8, 1, 1);
  const CsrMatrix& a = h.coarse().stiffness;
  const CsrMatrix& b = h.coarse().mass;
  const EigenPair p = solve_coarse(h, 1);

  CHECK(rayleigh_expansion_residual(p.value, p.vector, p.vector, a, b) <= 1e-13 * p.value);
  Vector twice = p.vector;
  scale(2.0, twice);
  CHECK(rayleigh_expansion_residual(p.value, p.vector, twice, a, b) <= 1e-12 * p.value);

  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Vector r(p.vector.size());
    for (double& v : r) {
      v = g(rng);
    }
    scale(1.0 / std::sqrt(b.bilinear(r, r)), r);
    Vector psi = p.vector;
    axpy(0.1, r, psi);
    CHECK(rayleigh_expansion_residual(p.value, p.vector, psi, a, b) <= 1e-10 * p.value);
  }
  CHECK_THROWS_AS(rayleigh_expansion_residual(p.value, p.vector, Vector(p.vector.size(), 0.0), a, b),
                  DegenerateVector);
}
