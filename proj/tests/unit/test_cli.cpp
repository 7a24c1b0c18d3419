#include "eigcorr/error.hpp"
#include "eigcorr/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace eigcorr;

namespace {

constexpr double pi = std::numbers::pi;

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "eigcorr_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

} // namespace

TEST_CASE("analytic reference") {
  const ExactEigenpair r11 = analytic_reference(1, 1);
  CHECK(r11.lambda == doctest::Approx(19.7392088021787).epsilon(1e-14));
  CHECK(analytic_reference(1, 2).lambda == doctest::Approx(5.0 * pi * pi).epsilon(1e-15));
  const double norm2 = integrate(unit_square_mesh(16), [&](Point p) { return r11.u(p) * r11.u(p); }, 12);
  CHECK(std::abs(norm2 - 1.0) <= 1e-10);
  // Gradient against a central difference.
  const Point p{0.3, 0.7};
  const double h = 1e-6;
  const auto g = r11.grad(p);
  CHECK(g[0] == doctest::Approx((r11.u({p.x + h, p.y}) - r11.u({p.x - h, p.y})) / (2 * h)).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx((r11.u({p.x, p.y + h}) - r11.u({p.x, p.y - h})) / (2 * h)).epsilon(1e-8));
  CHECK_THROWS_AS(analytic_reference(0, 1), InvalidArgument);

  CHECK(unit_square_mode(1) == std::pair{1, 1});
  CHECK(unit_square_mode(2) == std::pair{1, 2});
  CHECK(unit_square_mode(3) == std::pair{2, 1});
  CHECK(unit_square_mode(4) == std::pair{2, 2});
  CHECK(unit_square_multiplicity(1) == 1);
  CHECK(unit_square_multiplicity(2) == 2);
  CHECK(unit_square_reference(1).has_function());
  CHECK_FALSE(unit_square_reference(3).has_function());
  CHECK(unit_square_reference(1, 2.0, 4.0).lambda == doctest::Approx(pi * pi).epsilon(1e-15));
}

TEST_CASE("rate estimation") {
  const std::vector<double> e{1e-2, 2.5e-3};
  const std::vector<double> s{0.25, 0.125};
  CHECK(*estimate_rates(e, s)[0].slope == doctest::Approx(2.0).epsilon(1e-14));
  const std::vector<double> flat{3e-3, 3e-3};
  CHECK(*estimate_rates(flat, s)[0].slope == 0.0);
  const std::vector<double> zero{1e-3, 0.0};
  const auto r = estimate_rates(zero, s);
  CHECK(r[0].saturated);
  CHECK_FALSE(r[0].slope.has_value());
  CHECK_THROWS_AS(estimate_rates(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
  CHECK_THROWS_AS(estimate_rates(e, std::vector<double>{0.25, 0.0}), InvalidArgument);
}

TEST_CASE("config files and overrides") {
  const auto path = scratch("run.cfg");
  std::ofstream(path) << "# sweep\nway = multispace\nm = 4, 8\nlevels=2\n\nindex=1 # first\ntol=1e-9\n"
                         "diffusion = bump\n";
  RunConfig c;
  apply_config(read_config_file(path), c);
  CHECK(c.way == Way::multispace);
  CHECK(c.m == std::vector<int>{4, 8});
  CHECK(c.levels == 2);
  CHECK(c.tol == 1e-9);
  CHECK(c.diffusion == "bump");
  CHECK_NOTHROW(validate(c));

  RunConfig bad;
  CHECK_THROWS_AS(apply_config({{"colour", "red"}}, bad), ConfigError);
  CHECK_THROWS_AS(apply_config({{"levels", "two"}}, bad), ConfigError);
  CHECK_THROWS_AS(apply_config({{"way", "sideways"}}, bad), ConfigError);
  CHECK_THROWS_AS(apply_config({{"m", "4,,8"}}, bad), ConfigError);

  std::ofstream(scratch("broken.cfg")) << "levels 3\n";
  CHECK_THROWS_AS(read_config_file(scratch("broken.cfg")), ConfigError);
  CHECK_THROWS_AS(read_config_file(scratch("absent.cfg")), IoError);

  RunConfig v;
  v.order = 4;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v = RunConfig{};
  v.way = Way::multispace;
  v.levels = 3;
  v.order = 2;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v = RunConfig{};
  v.tol = 0.0;
  CHECK_THROWS_AS(validate(v), ConfigError);
  v = RunConfig{};
  v.weight = "-2";
  CHECK_THROWS_AS(validate(v), ConfigError);
}

TEST_CASE("coefficient presets") {
  CHECK(coefficient_preset("one").is_constant());
  CHECK(coefficient_preset("2.5").constant_value() == 2.5);
  CHECK(coefficient_preset("bump")({0.5, 0.5}) == doctest::Approx(1.5));
  CHECK(coefficient_preset("linear")({0.25, 0.0}) == doctest::Approx(1.25));
  CHECK_THROWS_AS(coefficient_preset("wavy"), ConfigError);
}

TEST_CASE("direct sweep converges at second order") {
  RunConfig c;
  c.m = {8, 16, 32};
  const RunReport r = run_direct(c);
  REQUIRE(r.rows.size() == 3);
  CHECK_FALSE(r.rows[0].rate_lambda.has_value());
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(r.rows[k].lambda >= 2.0 * pi * pi);
    CHECK(r.rows[k].h_or_p == 1.0 / c.m[k]);
    if (k > 0) {
      CHECK(std::abs(*r.rows[k].rate_lambda - 2.0) <= 0.2);
      CHECK(std::abs(*r.rows[k].rate_energy - 1.0) <= 0.2);
    }
  }
}

TEST_CASE("one-level multi-level run equals the direct run") {
  RunConfig c;
  c.m = {4, 8};
  c.levels = 1;
  const RunReport a = run_multilevel(c);
  const RunReport b = run_direct(c);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    CHECK(a.rows[k].lambda == b.rows[k].lambda);
    CHECK(a.rows[k].err_energy == b.rows[k].err_energy);
  }
}

TEST_CASE("multispace P1 to P2 sweep gains two orders") {
  RunConfig c;
  c.way = Way::multispace;
  c.m = {8, 16, 32};
  c.levels = 2;
  const RunReport r = run_multilevel(c);
  REQUIRE(r.rows.size() == 3);
  for (std::size_t k = 1; k < 3; ++k) {
    CHECK(std::abs(*r.rows[k].rate_lambda - 4.0) <= 0.4);
  }
}

TEST_CASE("per-level rows for a single base mesh") {
  RunConfig c;
  c.m = {4};
  c.levels = 3;
  const RunReport r = run_multilevel(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].level == 1);
  CHECK(r.rows[2].h_or_p == 1.0 / 64);
  CHECK(r.rows[1].rate_lambda.has_value());

  c.way = Way::multispace;
  const RunReport s = run_multilevel(c);
  CHECK(s.rows[2].h_or_p == 3.0);
  CHECK_FALSE(s.rows[2].rate_lambda.has_value());

  const RunReport tg = run_two_grid(c);
  CHECK(tg.rows.size() == 2);
  c.levels = 1;
  CHECK_THROWS_AS(run_two_grid(c), ConfigError);
}

TEST_CASE("re-running a configuration reproduces every numeric column") {
  RunConfig c;
  c.m = {4};
  c.levels = 3;
  auto strip_wall = [](RunReport r) {
    for (auto& row : r.rows) {
      row.wall_ms = 0.0;
    }
    std::ostringstream s;
    write_csv(r.rows, s);
    return s.str();
  };
  CHECK(strip_wall(run_multilevel(c)) == strip_wall(run_multilevel(c)));
}

TEST_CASE("variable coefficients use a labelled numerical reference") {
  RunConfig c;
  c.m = {4};
  c.levels = 2;
  c.diffusion = "bump";
  c.weight = "linear";
  const RunReport r = run_multilevel(c);
  CHECK(r.reference_label.find("direct") != std::string::npos);
  CHECK(r.rows.back().err_lambda.has_value());
  CHECK_FALSE(r.rows.back().err_energy.has_value());
  CHECK(r.rows.back().lambda >= r.reference_lambda);
  CHECK(*r.rows.back().err_lambda < *r.rows.front().err_lambda);
}

TEST_CASE("imported meshes") {
  const auto base = scratch("square2");
  save_mesh(unit_square_mesh(2), base);
  RunConfig c;
  c.mesh = base.string();
  c.m = {0, 1};
  c.levels = 2;
  c.refine_per_level = 2;
  const RunReport r = run_multilevel(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.reference_label.find("direct") != std::string::npos);
  CHECK(r.rows[1].lambda < r.rows[0].lambda);
}

TEST_CASE("CSV output") {
  ConvergenceRow row;
  row.level = 2;
  row.h_or_p = 0.25;
  row.dofs = 9;
  row.lambda = 20.5;
  row.err_lambda = 0.75;
  row.wall_ms = 1.5;
  std::ostringstream s;
  write_csv({row}, s);
  CHECK(s.str() == std::string(kCsvHeader) + "\n2,0.25,9,20.5,0.75,,,,,1.5\n");

  const auto path = scratch("rows.csv");
  write_csv({row}, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == kCsvHeader);
  CHECK_THROWS_AS(write_csv({row}, scratch("no/such/dir/rows.csv")), IoError);

  std::ostringstream summary;
  RunReport report;
  report.method = "mlc";
  report.rows = {row};
  print_summary(report, summary);
  CHECK(summary.str().find("mlc") != std::string::npos);
}
