#include "eigcorr/correction.hpp"

#include "eigcorr/error.hpp"

#include <chrono>
#include <cmath>

namespace eigcorr {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void b_normalize(const CsrMatrix& b, Vector& x) {
  const double nrm = b.bilinear(x, x);
  if (!(nrm > 0.0)) {
    throw DegenerateVector("b-normalisation of a vector with x^T B x <= 0");
  }
  scale(1.0 / std::sqrt(nrm), x);
}

void check_level(const Hierarchy& h, std::size_t level, const char* who) {
  if (level >= h.n_levels()) {
    throw InvalidArgument(std::string(who) + ": level " + std::to_string(level) +
                          " out of range (hierarchy has " + std::to_string(h.n_levels()) + ")");
  }
}

LevelRecord make_record(const Hierarchy& h, std::size_t level, const EigenPair& pair,
                        const std::string& stage, const ExactEigenpair* reference) {
  const Level& lv = h.level(level);
  LevelRecord rec;
  rec.level = level;
  rec.stage = stage;
  rec.order = lv.space.order();
  rec.subdivisions = lv.subdivisions;
  rec.h = lv.subdivisions > 0 ? 1.0 / lv.subdivisions : mesh_size(lv.space.mesh());
  rec.dofs = lv.space.n_free();
  rec.lambda = pair.value;
  if (reference != nullptr) {
    rec.err_lambda = std::abs(pair.value - reference->lambda);
    if (reference->has_function()) {
      Vector u = lv.space.extend(pair.vector);
      // Align the sign with the exact eigenfunction before measuring.
      if (dot(u, lv.space.interpolate(reference->u)) < 0.0) {
        scale(-1.0, u);
      }
      rec.err_energy = energy_error(lv.space, u, reference->grad);
      rec.err_l2 = l2_error(lv.space, u, reference->u);
    }
  }
  return rec;
}

// Solves A x = lambda B (prolong u) on `target`.
Vector source_solve(const Level& target, const CsrMatrix& prolong, const EigenPair& pair,
                    const SolverOptions& options, StepStats* stats) {
  if (prolong.n_cols() != pair.vector.size()) {
    throw InvalidArgument("source_correction: eigenvector length does not match the level");
  }
  const Vector w = prolong * pair.vector;
  Vector rhs = target.mass * w;
  scale(pair.value, rhs);
  // w solves the problem exactly when it is already a fine eigenvector.
  CgResult res = cg_solve(target.stiffness, rhs, options.cg, w);
  if (stats != nullptr) {
    stats->cg_iterations += res.iterations;
  }
  return std::move(res.x);
}

EigenPair rayleigh_pair(const Level& level, Vector u) {
  EigenPair out;
  out.value = rayleigh_quotient(level.stiffness, level.mass, u);
  b_normalize(level.mass, u);
  fix_sign(u);
  out.vector = std::move(u);
  return out;
}

EigenPair prolonged_coarse(const Hierarchy& h, std::size_t level, const EigenPair& coarse) {
  const Level& lv = h.level(level);
  EigenPair out;
  out.value = coarse.value;
  out.vector = lv.prolong_coarse * coarse.vector;
  b_normalize(lv.mass, out.vector);
  fix_sign(out.vector);
  return out;
}

} // namespace

EigenPair solve_coarse(const Hierarchy& hierarchy, int index, const SolverOptions& options,
                       StepStats* stats) {
  const Level& coarse = hierarchy.coarse();
  if (index < 1 || static_cast<Index>(index) > coarse.space.n_free()) {
    throw InvalidArgument("solve_coarse: eigen index " + std::to_string(index) +
                          " outside 1.." + std::to_string(coarse.space.n_free()));
  }
  EigenStats es;
  auto pairs = smallest_eigenpairs(coarse.stiffness, coarse.mass, index, options.eigen, &es);
  if (stats != nullptr) {
    stats->cg_iterations += es.cg_iterations;
    stats->eigen_iterations += es.iterations;
  }
  return std::move(pairs.back());
}

Vector source_correction(const Hierarchy& hierarchy, std::size_t level, const EigenPair& pair,
                         const SolverOptions& options, StepStats* stats) {
  check_level(hierarchy, level + 1, "source_correction");
  const Level& target = hierarchy.level(level + 1);
  return source_solve(target, target.prolong_step, pair, options, stats);
}

EigenPair augmented_eigensolve(const Hierarchy& hierarchy, std::size_t level,
                               std::span<const double> u_tilde, int index,
                               const SolverOptions& options, double previous_lambda) {
  check_level(hierarchy, level, "augmented_eigensolve");
  if (level == 0) {
    throw InvalidArgument("augmented_eigensolve: the coarsest level has no augmented space");
  }
  const Level& lv = hierarchy.level(level);
  if (u_tilde.size() != lv.space.n_free()) {
    throw InvalidArgument("augmented_eigensolve: vector length does not match the level");
  }
  const Index nh = lv.prolong_coarse.n_cols();
  if (index < 1 || static_cast<Index>(index) > nh + 1) {
    throw InvalidArgument("augmented_eigensolve: eigen index out of range");
  }

  Vector ut(u_tilde.begin(), u_tilde.end());
  if (norm_inf(ut) == 0.0) {
    throw DegenerateAugmentation("augmented_eigensolve: zero augmentation vector");
  }
  b_normalize(lv.mass, ut);

  const Vector aut = lv.stiffness * ut;
  const Vector but = lv.mass * ut;
  const Vector pt_aut = lv.prolong_coarse.multiply_transpose(aut);
  const Vector pt_but = lv.prolong_coarse.multiply_transpose(but);

  DenseMatrix a(nh + 1, nh + 1);
  DenseMatrix b(nh + 1, nh + 1);
  for (Index i = 0; i < nh; ++i) {
    for (Index j = 0; j < nh; ++j) {
      a(i, j) = lv.coarse_stiffness(i, j);
      b(i, j) = lv.coarse_mass(i, j);
    }
    a(i, nh) = a(nh, i) = pt_aut[i];
    b(i, nh) = b(nh, i) = pt_but[i];
  }
  a(nh, nh) = dot(ut, aut);
  b(nh, nh) = dot(ut, but);

  std::vector<EigenPair> pairs;
  try {
    pairs = dense_gen_eig_sym(a, b);
  } catch (const NotSpd& e) {
    throw DegenerateAugmentation(std::string("augmented space is numerically the coarse space: ") +
                                 e.what());
  }

  std::size_t pick = static_cast<std::size_t>(index - 1);
  if (options.selection == EigenSelection::closest_to_previous && std::isfinite(previous_lambda)) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (std::abs(pairs[k].value - previous_lambda) < std::abs(pairs[pick].value - previous_lambda)) {
        pick = k;
      }
    }
  }
  const Vector& c = pairs[pick].vector;

  EigenPair out;
  out.value = pairs[pick].value;
  out.vector = lv.prolong_coarse * std::span<const double>(c.data(), nh);
  axpy(c[nh], ut, out.vector);
  b_normalize(lv.mass, out.vector);
  fix_sign(out.vector);
  return out;
}

EigenPair one_correction_step(const Hierarchy& hierarchy, std::size_t level, const EigenPair& pair,
                              int index, const SolverOptions& options, StepStats* stats) {
  const Vector ut = source_correction(hierarchy, level, pair, options, stats);
  return augmented_eigensolve(hierarchy, level + 1, ut, index, options, pair.value);
}

MultiLevelResult multi_level_solve(const Hierarchy& hierarchy, int index,
                                   const SolverOptions& options, const ExactEigenpair* reference) {
  MultiLevelResult result;
  auto& records = result.trace.records;
  const std::size_t n = hierarchy.n_levels();

  auto start = Clock::now();
  StepStats stats;
  const EigenPair coarse = solve_coarse(hierarchy, index, options, &stats);
  double ms = elapsed_ms(start);
  records.push_back(make_record(hierarchy, 0, coarse, "coarse", reference));
  records.back().cg_iterations = stats.cg_iterations;
  records.back().eigen_iterations = stats.eigen_iterations;
  records.back().wall_ms = ms;

  EigenPair current = coarse;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    start = Clock::now();
    stats = {};
    std::string stage = "correction";
    try {
      current = one_correction_step(hierarchy, k, current, index, options, &stats);
    } catch (const DegenerateAugmentation&) {
      current = prolonged_coarse(hierarchy, k + 1, coarse);
      stage = "fallback";
    }
    ms = elapsed_ms(start);
    records.push_back(make_record(hierarchy, k + 1, current, stage, reference));
    records.back().cg_iterations = stats.cg_iterations;
    records.back().wall_ms = ms;
  }

  if (n >= 2) {
    start = Clock::now();
    stats = {};
    Vector u = source_correction(hierarchy, n - 2, current, options, &stats);
    current = rayleigh_pair(hierarchy.finest(), std::move(u));
    ms = elapsed_ms(start);
    records.push_back(make_record(hierarchy, n - 1, current, "final", reference));
    records.back().cg_iterations = stats.cg_iterations;
    records.back().wall_ms = ms;
  }
  result.pair = std::move(current);
  return result;
}

MultiLevelResult two_grid_solve(const Hierarchy& hierarchy, int index, const SolverOptions& options,
                                const ExactEigenpair* reference) {
  MultiLevelResult result;
  auto& records = result.trace.records;

  auto start = Clock::now();
  StepStats stats;
  EigenPair current = solve_coarse(hierarchy, index, options, &stats);
  double ms = elapsed_ms(start);
  records.push_back(make_record(hierarchy, 0, current, "coarse", reference));
  records.back().cg_iterations = stats.cg_iterations;
  records.back().eigen_iterations = stats.eigen_iterations;
  records.back().wall_ms = ms;

  if (hierarchy.n_levels() >= 2) {
    start = Clock::now();
    stats = {};
    const Level& fine = hierarchy.finest();
    Vector u = source_solve(fine, fine.prolong_coarse, current, options, &stats);
    current = rayleigh_pair(fine, std::move(u));
    ms = elapsed_ms(start);
    records.push_back(make_record(hierarchy, hierarchy.n_levels() - 1, current, "final", reference));
    records.back().cg_iterations = stats.cg_iterations;
    records.back().wall_ms = ms;
  }
  result.pair = std::move(current);
  return result;
}

double rayleigh_expansion_residual(double lambda, std::span<const double> u,
                                   std::span<const double> psi, const CsrMatrix& a,
                                   const CsrMatrix& b) {
  if (u.size() != psi.size() || u.size() != a.n_rows()) {
    throw InvalidArgument("rayleigh_expansion_residual: size mismatch");
  }
  const double lambda_hat = rayleigh_quotient(a, b, psi);
  Vector d(u.begin(), u.end());
  axpy(-1.0, psi, d);
  const double rhs = (a.bilinear(d, d) - lambda * b.bilinear(d, d)) / b.bilinear(psi, psi);
  return std::abs((lambda_hat - lambda) - rhs);
}

} // namespace eigcorr
