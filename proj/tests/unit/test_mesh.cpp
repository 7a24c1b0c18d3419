#include "eigcorr/error.hpp"
#include "eigcorr/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

using namespace eigcorr;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "eigcorr_mesh_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::vector<std::pair<double, double>> sorted_coords(const TriMesh& mesh) {
  std::vector<std::pair<double, double>> out;
  for (const Point& p : mesh.vertices) {
    // Rounded so that last-bit differences cannot change the sort order.
    out.emplace_back(std::round(p.x * 1e12) / 1e12, std::round(p.y * 1e12) / 1e12);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST_CASE("unit square mesh counts") {
  const TriMesh m1 = unit_square_mesh(1);
  CHECK(m1.n_vertices() == 4);
  CHECK(m1.n_triangles() == 2);
  CHECK(m1.boundary_edges.size() == 4);

  const TriMesh m2 = unit_square_mesh(2);
  CHECK(m2.n_vertices() == 9);
  CHECK(m2.n_triangles() == 8);
  const auto interior = std::count_if(m2.vertices.begin(), m2.vertices.end(),
                                      [](Point p) { return !on_unit_square_boundary(p); });
  CHECK(interior == 1);

  CHECK(total_area(unit_square_mesh(4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mesh_size(unit_square_mesh(4)) == doctest::Approx(std::sqrt(2.0) / 4));
  CHECK_THROWS_AS(unit_square_mesh(0), InvalidArgument);
}

TEST_CASE("unit square meshes satisfy the mesh invariants") {
  for (int m = 1; m <= 6; ++m) {
    const TriMesh mesh = unit_square_mesh(m);
    CHECK_NOTHROW(validate(mesh));
    for (Index t = 0; t < mesh.n_triangles(); ++t) {
      CHECK(signed_area(mesh, t) > 0.0);
    }
    CHECK(mesh.boundary_edges.size() == static_cast<std::size_t>(4 * m));
  }
}

TEST_CASE("edge table covers each edge once") {
  const TriMesh mesh = unit_square_mesh(3);
  const EdgeTable e = build_edges(mesh);
  // Euler: V - E + F = 1 for a disc.
  CHECK(mesh.n_vertices() + mesh.n_triangles() - e.edges.size() == 1);
  CHECK(std::is_sorted(e.edges.begin(), e.edges.end()));
  std::map<Index, int> uses;
  for (const auto& te : e.triangle_edges) {
    for (Index k : te) {
      ++uses[k];
    }
  }
  std::size_t boundary = 0;
  for (auto [k, n] : uses) {
    CHECK((n == 1 || n == 2));
    boundary += n == 1;
  }
  CHECK(boundary == mesh.boundary_edges.size());
}

TEST_CASE("regular refinement combinatorics") {
  const TriMesh r = refine_regular(unit_square_mesh(1));
  CHECK(r.n_vertices() == 9);
  CHECK(r.n_triangles() == 8);
  CHECK(r.generation == 1);

  for (int m = 1; m <= 4; ++m) {
    const TriMesh mesh = unit_square_mesh(m);
    const TriMesh fine = refine_regular(mesh);
    CHECK(fine.n_triangles() == 4 * mesh.n_triangles());
    CHECK(fine.n_vertices() == mesh.n_vertices() + build_edges(mesh).edges.size());
    CHECK_NOTHROW(validate(fine));
    // Same vertex set as the structured mesh with twice the subdivisions.
    const auto a = sorted_coords(fine);
    const auto b = sorted_coords(unit_square_mesh(2 * m));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].first - b[i].first) <= 1e-15);
      CHECK(std::abs(a[i].second - b[i].second) <= 1e-15);
    }
  }
}

TEST_CASE("children partition their parent") {
  const TriMesh mesh = unit_square_mesh(3);
  const TriMesh fine = refine_regular(mesh);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    double sum = 0.0;
    for (Index c = 0; c < 4; ++c) {
      const double a = signed_area(fine, 4 * t + c);
      CHECK(a > 0.0);
      CHECK(a == doctest::Approx(signed_area(mesh, t) / 4).epsilon(1e-13));
      sum += a;
    }
    CHECK(std::abs(sum - signed_area(mesh, t)) <= 1e-13);
  }
  // Fine vertices keep the parent's corners first.
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    CHECK(fine.triangles[4 * t][0] == mesh.triangles[t][0]);
    CHECK(fine.triangles[4 * t + 1][1] == mesh.triangles[t][1]);
    CHECK(fine.triangles[4 * t + 2][2] == mesh.triangles[t][2]);
  }
}

TEST_CASE("refined boundary stays on the boundary") {
  const TriMesh fine = refine_regular(unit_square_mesh(2), 3);
  CHECK(fine.generation == 3);
  for (const Edge& e : fine.boundary_edges) {
    const Point a = fine.vertices[e[0]];
    const Point b = fine.vertices[e[1]];
    const Point mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
    CHECK(on_unit_square_boundary(a));
    CHECK(on_unit_square_boundary(b));
    CHECK(on_unit_square_boundary(mid));
  }
  CHECK(fine.boundary_edges.size() == 4 * 16);
}

TEST_CASE("save and load round trip") {
  const TriMesh mesh = refine_regular(unit_square_mesh(2));
  const auto base = scratch("roundtrip");
  save_mesh(mesh, base);
  for (const auto& p : {base, std::filesystem::path(base.string() + ".node"),
                        std::filesystem::path(base.string() + ".ele")}) {
    const TriMesh back = load_mesh(p);
    CHECK(back.vertices == mesh.vertices);
    CHECK(back.triangles == mesh.triangles);
    CHECK(back.boundary_edges == mesh.boundary_edges);
  }
}

TEST_CASE("loading small hand-written files") {
  const auto base = scratch("square");
  write_file(base.string() + ".node", "# unit square\n4 2 0 1\n1 0 0 1\n2 1 0 1\n3 1 1 1\n4 0 1 1\n");
  write_file(base.string() + ".ele", "2 3 0\n1 1 2 3\n\n2 1 3 4\n");
  const TriMesh mesh = load_mesh(base);
  CHECK(mesh.n_triangles() == 2);
  CHECK(mesh.n_vertices() == 4);
  CHECK(mesh.boundary_edges.size() == 4);

  SUBCASE("clockwise input is reoriented") {
    write_file(base.string() + ".ele", "2 3 0\n1 1 3 2\n2 1 4 3\n");
    const TriMesh cw = load_mesh(base);
    CHECK(signed_area(cw, 0) > 0.0);
    CHECK(signed_area(cw, 1) > 0.0);
  }
}

TEST_CASE("mesh parse errors name the line") {
  const auto base = scratch("bad");
  write_file(base.string() + ".node", "4 2 0 1\n1 0 0 1\n2 1 0 1\n3 1 1 1\n4 0 1 1\n");

  SUBCASE("index out of range") {
    write_file(base.string() + ".ele", "2 3 0\n1 1 2 3\n2 1 3 9\n");
    try {
      load_mesh(base);
      FAIL("expected an error");
    } catch (const IndexRangeError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
  }
  SUBCASE("too few triangles") {
    write_file(base.string() + ".ele", "3 3 0\n1 1 2 3\n2 1 3 4\n");
    CHECK_THROWS_AS(load_mesh(base), CountMismatchError);
  }
  SUBCASE("too many triangles") {
    write_file(base.string() + ".ele", "1 3 0\n1 1 2 3\n2 1 3 4\n");
    CHECK_THROWS_AS(load_mesh(base), CountMismatchError);
  }
  SUBCASE("malformed line") {
    write_file(base.string() + ".ele", "2 3 0\n1 1 2 x\n2 1 3 4\n");
    try {
      load_mesh(base);
      FAIL("expected an error");
    } catch (const MalformedLineError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_mesh(scratch("does_not_exist")), MissingFileError);
  }
}

TEST_CASE("validate rejects broken meshes") {
  TriMesh mesh = unit_square_mesh(1);
  TriMesh bad = mesh;
  bad.triangles[0] = {0, 1, 7};
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
  bad = mesh;
  std::swap(bad.triangles[0][1], bad.triangles[0][2]);
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
  bad = mesh;
  bad.boundary_edges.pop_back();
  CHECK_THROWS_AS(validate(bad), InvalidArgument);
}
