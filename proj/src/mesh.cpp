#include "eigcorr/mesh.hpp"

#include "eigcorr/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

namespace eigcorr {

namespace {

Edge sorted_edge(Index a, Index b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Edges with exactly one adjacent triangle, oriented as in that triangle and
// listed in edge-table order.
std::vector<Edge> topological_boundary(const TriMesh& mesh, const EdgeTable& table) {
  std::vector<int> count(table.edges.size(), 0);
  std::vector<Edge> oriented(table.edges.size());
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int j = 0; j < 3; ++j) {
      const Index e = table.triangle_edges[t][j];
      ++count[e];
      oriented[e] = {tri[j], tri[(j + 1) % 3]};
    }
  }
  std::vector<Edge> boundary;
  for (Index e = 0; e < table.edges.size(); ++e) {
    if (count[e] == 1) {
      boundary.push_back(oriented[e]);
    }
  }
  return boundary;
}

} // namespace

EdgeTable build_edges(const TriMesh& mesh) {
  struct Local {
    Edge key;
    Index triangle;
    int slot;
  };
  std::vector<Local> all;
  all.reserve(3 * mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int j = 0; j < 3; ++j) {
      all.push_back({sorted_edge(tri[j], tri[(j + 1) % 3]), t, j});
    }
  }
  std::sort(all.begin(), all.end(), [](const Local& a, const Local& b) {
    return a.key != b.key ? a.key < b.key
                          : (a.triangle != b.triangle ? a.triangle < b.triangle : a.slot < b.slot);
  });

  EdgeTable table;
  table.triangle_edges.resize(mesh.n_triangles());
  for (const auto& item : all) {
    if (table.edges.empty() || table.edges.back() != item.key) {
      table.edges.push_back(item.key);
    }
    table.triangle_edges[item.triangle][item.slot] = table.edges.size() - 1;
  }
  return table;
}

double signed_area(const TriMesh& mesh, Index triangle) {
  const auto& tri = mesh.triangles[triangle];
  const Point& a = mesh.vertices[tri[0]];
  const Point& b = mesh.vertices[tri[1]];
  const Point& c = mesh.vertices[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double total_area(const TriMesh& mesh) {
  double sum = 0.0;
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    sum += signed_area(mesh, t);
  }
  return sum;
}

double mesh_size(const TriMesh& mesh) {
  double h = 0.0;
  for (const auto& tri : mesh.triangles) {
    for (int j = 0; j < 3; ++j) {
      const Point& a = mesh.vertices[tri[j]];
      const Point& b = mesh.vertices[tri[(j + 1) % 3]];
      h = std::max(h, std::hypot(b.x - a.x, b.y - a.y));
    }
  }
  return h;
}

void validate(const TriMesh& mesh) {
  const Index nv = mesh.n_vertices();
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    for (Index v : mesh.triangles[t]) {
      if (v >= nv) {
        throw InvalidArgument("triangle " + std::to_string(t) + " references vertex " +
                              std::to_string(v) + " of " + std::to_string(nv));
      }
    }
    if (!(signed_area(mesh, t) > 0.0)) {
      throw InvalidArgument("triangle " + std::to_string(t) + " has non-positive signed area");
    }
  }
  for (const auto& e : mesh.boundary_edges) {
    if (e[0] >= nv || e[1] >= nv) {
      throw InvalidArgument("boundary edge references a vertex out of range");
    }
  }

  const EdgeTable table = build_edges(mesh);
  std::vector<int> count(table.edges.size(), 0);
  std::vector<int> forward(table.edges.size(), 0);
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int j = 0; j < 3; ++j) {
      const Index e = table.triangle_edges[t][j];
      ++count[e];
      if (tri[j] < tri[(j + 1) % 3]) {
        ++forward[e];
      }
    }
  }
  for (Index e = 0; e < table.edges.size(); ++e) {
    if (count[e] > 2) {
      throw InvalidArgument("edge shared by more than two triangles");
    }
    if (count[e] == 2 && forward[e] != 1) {
      throw InvalidArgument("neighbouring triangles with inconsistent orientation");
    }
  }

  auto expected = topological_boundary(mesh, table);
  auto given = mesh.boundary_edges;
  auto canon = [](std::vector<Edge>& edges) {
    for (auto& e : edges) {
      e = sorted_edge(e[0], e[1]);
    }
    std::sort(edges.begin(), edges.end());
  };
  canon(expected);
  canon(given);
  if (expected != given) {
    throw InvalidArgument("boundary edges do not match the edges with a single triangle");
  }
}

TriMesh unit_square_mesh(int m) {
  if (m < 1) {
    throw InvalidArgument("unit_square_mesh: subdivision count must be >= 1, got " +
                          std::to_string(m));
  }
  const Index n = static_cast<Index>(m);
  TriMesh mesh;
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      mesh.vertices.push_back({static_cast<double>(i) / m, static_cast<double>(j) / m});
    }
  }
  auto id = [n](Index i, Index j) { return j * (n + 1) + i; };
  mesh.triangles.reserve(2 * n * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index p00 = id(i, j), p10 = id(i + 1, j), p11 = id(i + 1, j + 1), p01 = id(i, j + 1);
      mesh.triangles.push_back({p00, p10, p11});
      mesh.triangles.push_back({p00, p11, p01});
    }
  }
  mesh.boundary_edges = topological_boundary(mesh, build_edges(mesh));
  return mesh;
}

TriMesh refine_regular(const TriMesh& mesh) {
  const EdgeTable table = build_edges(mesh);
  const Index nv = mesh.n_vertices();

  TriMesh fine;
  fine.generation = mesh.generation + 1;
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(nv + table.edges.size());
  for (const auto& e : table.edges) {
    const Point& a = mesh.vertices[e[0]];
    const Point& b = mesh.vertices[e[1]];
    fine.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
  }

  fine.triangles.reserve(4 * mesh.n_triangles());
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Index m01 = nv + table.triangle_edges[t][0];
    const Index m12 = nv + table.triangle_edges[t][1];
    const Index m20 = nv + table.triangle_edges[t][2];
    fine.triangles.push_back({tri[0], m01, m20});
    fine.triangles.push_back({m01, tri[1], m12});
    fine.triangles.push_back({m20, m12, tri[2]});
    fine.triangles.push_back({m01, m12, m20});
  }
  fine.boundary_edges = topological_boundary(fine, build_edges(fine));
  return fine;
}

TriMesh refine_regular(const TriMesh& mesh, int times) {
  if (times < 0) {
    throw InvalidArgument("refine_regular: negative refinement count");
  }
  TriMesh out = mesh;
  for (int r = 0; r < times; ++r) {
    out = refine_regular(out);
  }
  return out;
}

bool on_unit_square_boundary(Point p, double tol) {
  return std::abs(p.x) <= tol || std::abs(p.x - 1.0) <= tol || std::abs(p.y) <= tol ||
         std::abs(p.y - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// Triangle-format I/O

namespace {

std::filesystem::path base_of(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".node" || ext == ".ele") {
    auto base = path;
    base.replace_extension();
    return base;
  }
  return path;
}

std::filesystem::path with_ext(const std::filesystem::path& base, const char* ext) {
  return std::filesystem::path(base.string() + ext);
}

/// Yields the significant lines of a Triangle file, with comments stripped.
class LineReader {
public:
  explicit LineReader(const std::filesystem::path& path) : path_(path.string()), in_(path) {
    if (!in_) {
      throw MissingFileError("cannot open file", path_, 0);
    }
  }

  std::optional<std::istringstream> next() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      if (auto hash = raw.find('#'); hash != std::string::npos) {
        raw.erase(hash);
      }
      if (raw.find_first_not_of(" \t\r") != std::string::npos) {
        return std::istringstream(raw);
      }
    }
    return std::nullopt;
  }

  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }

private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_ = 0;
};

template <typename T> T read_field(std::istringstream& in, const LineReader& reader, const char* what) {
  T value{};
  if (!(in >> value)) {
    throw MalformedLineError(std::string("expected ") + what, reader.path(), reader.line());
  }
  return value;
}

// Returns the 0-based index of an entry whose on-disk index must be
// 1..count and equal to its position.
Index read_entry_index(std::istringstream& in, const LineReader& reader, Index position,
                       Index count) {
  const long long idx = read_field<long long>(in, reader, "entry index");
  if (idx < 1 || static_cast<Index>(idx) > count) {
    throw IndexRangeError("entry index " + std::to_string(idx) + " outside 1.." +
                              std::to_string(count),
                          reader.path(), reader.line());
  }
  if (static_cast<Index>(idx) != position + 1) {
    throw MalformedLineError("entry index " + std::to_string(idx) + " out of sequence, expected " +
                                 std::to_string(position + 1),
                             reader.path(), reader.line());
  }
  return position;
}

void expect_no_extra(LineReader& reader, Index declared, const char* what) {
  if (reader.next()) {
    throw CountMismatchError(std::string("more ") + what + " than the " +
                                 std::to_string(declared) + " declared",
                             reader.path(), reader.line());
  }
}

} // namespace

TriMesh load_mesh(const std::filesystem::path& path) {
  const auto base = base_of(path);
  TriMesh mesh;

  {
    LineReader reader(with_ext(base, ".node"));
    auto header = reader.next();
    if (!header) {
      throw MalformedLineError("empty node file", reader.path(), reader.line());
    }
    const long long n = read_field<long long>(*header, reader, "vertex count");
    const int dim = read_field<int>(*header, reader, "dimension");
    const int n_attr = read_field<int>(*header, reader, "attribute count");
    const int n_markers = read_field<int>(*header, reader, "boundary marker flag");
    if (n < 0 || dim != 2 || n_attr < 0 || (n_markers != 0 && n_markers != 1)) {
      throw MalformedLineError("node header must read '<n> 2 <attributes> <0|1>'", reader.path(),
                               reader.line());
    }
    const Index count = static_cast<Index>(n);
    mesh.vertices.resize(count);
    for (Index k = 0; k < count; ++k) {
      auto line = reader.next();
      if (!line) {
        throw CountMismatchError("file declares " + std::to_string(count) + " vertices but has " +
                                     std::to_string(k),
                                 reader.path(), reader.line());
      }
      read_entry_index(*line, reader, k, count);
      mesh.vertices[k].x = read_field<double>(*line, reader, "x coordinate");
      mesh.vertices[k].y = read_field<double>(*line, reader, "y coordinate");
    }
    expect_no_extra(reader, count, "vertices");
  }

  {
    LineReader reader(with_ext(base, ".ele"));
    auto header = reader.next();
    if (!header) {
      throw MalformedLineError("empty element file", reader.path(), reader.line());
    }
    const long long n = read_field<long long>(*header, reader, "triangle count");
    const int per = read_field<int>(*header, reader, "nodes per triangle");
    if (n < 0 || per != 3) {
      throw MalformedLineError("element header must read '<n> 3 <attributes>'", reader.path(),
                               reader.line());
    }
    const Index count = static_cast<Index>(n);
    const Index nv = mesh.n_vertices();
    mesh.triangles.resize(count);
    for (Index k = 0; k < count; ++k) {
      auto line = reader.next();
      if (!line) {
        throw CountMismatchError("file declares " + std::to_string(count) + " triangles but has " +
                                     std::to_string(k),
                                 reader.path(), reader.line());
      }
      read_entry_index(*line, reader, k, count);
      for (int j = 0; j < 3; ++j) {
        const long long v = read_field<long long>(*line, reader, "vertex index");
        if (v < 1 || static_cast<Index>(v) > nv) {
          throw IndexRangeError("vertex index " + std::to_string(v) + " outside 1.." +
                                    std::to_string(nv),
                                reader.path(), reader.line());
        }
        mesh.triangles[k][j] = static_cast<Index>(v - 1);
      }
      const double area = signed_area(mesh, k);
      if (area == 0.0) {
        throw MalformedLineError("degenerate triangle", reader.path(), reader.line());
      }
      if (area < 0.0) {
        std::swap(mesh.triangles[k][1], mesh.triangles[k][2]);
      }
    }
    expect_no_extra(reader, count, "triangles");
  }

  mesh.boundary_edges = topological_boundary(mesh, build_edges(mesh));
  return mesh;
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path) {
  const auto base = base_of(path);
  std::vector<int> marker(mesh.n_vertices(), 0);
  for (const auto& e : mesh.boundary_edges) {
    marker[e[0]] = marker[e[1]] = 1;
  }

  std::ofstream node(with_ext(base, ".node"));
  std::ofstream ele(with_ext(base, ".ele"));
  if (!node || !ele) {
    throw IoError("cannot write mesh files at " + base.string());
  }
  node << mesh.n_vertices() << " 2 0 1\n" << std::setprecision(17);
  for (Index v = 0; v < mesh.n_vertices(); ++v) {
    node << v + 1 << ' ' << mesh.vertices[v].x << ' ' << mesh.vertices[v].y << ' ' << marker[v]
         << '\n';
  }
  ele << mesh.n_triangles() << " 3 0\n";
  for (Index t = 0; t < mesh.n_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    ele << t + 1 << ' ' << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
  if (!node || !ele) {
    throw IoError("failed writing mesh files at " + base.string());
  }
}

} // namespace eigcorr
