#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace eigcorr {

using Index = std::size_t;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Triangle = std::array<Index, 3>;
using Edge = std::array<Index, 2>;

/// Conforming planar triangulation.
///
/// Triangles are counterclockwise. Meshes produced by `refine_regular` keep the
/// parent vertices as their first vertices and number the four children of
/// parent triangle t as 4t, 4t+1, 4t+2, 4t+3 (the last one is the interior
/// child), so the ancestor of fine triangle t after r refinements is t / 4^r.
struct TriMesh {
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<Edge> boundary_edges;
  int generation = 0;

  std::size_t n_vertices() const { return vertices.size(); }
  std::size_t n_triangles() const { return triangles.size(); }
};

/// Unique edges of a mesh, lexicographically ordered on (min, max) endpoint,
/// and for every triangle the indices of its local edges
/// (v0,v1), (v1,v2), (v2,v0).
struct EdgeTable {
  std::vector<Edge> edges;
  std::vector<std::array<Index, 3>> triangle_edges;
};

EdgeTable build_edges(const TriMesh& mesh);

double signed_area(const TriMesh& mesh, Index triangle);
double total_area(const TriMesh& mesh);

/// Longest edge over all triangles.
double mesh_size(const TriMesh& mesh);

/// Throws InvalidArgument naming the first violated invariant: index range,
/// positive orientation, edge manifoldness, and boundary edges being exactly
/// the edges with a single adjacent triangle.
void validate(const TriMesh& mesh);

/// Structured m x m grid on the unit square, each cell split along the
/// (0,0)-(1,1) diagonal direction.
TriMesh unit_square_mesh(int m);

/// Red refinement: every triangle is split into four congruent children
/// through its edge midpoints. Midpoint of edge e gets vertex index
/// n_vertices + e in `build_edges` order.
TriMesh refine_regular(const TriMesh& mesh);

TriMesh refine_regular(const TriMesh& mesh, int times);

bool on_unit_square_boundary(Point p, double tol = 1e-14);

/// Reads `<base>.node` and `<base>.ele` (Triangle format, 1-based indices).
/// `path` may name either file or the common base. Boundary edges are the
/// edges with one adjacent triangle; clockwise triangles are reoriented.
TriMesh load_mesh(const std::filesystem::path& path);

/// Writes `<base>.node` and `<base>.ele` with round-trip precision.
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path);

} // namespace eigcorr
