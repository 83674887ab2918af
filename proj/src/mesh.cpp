#include "pff/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace pff {

TriMesh::TriMesh(std::vector<Point> nodes, std::vector<std::array<Index, 3>> triangles,
                 std::vector<BoundaryEdge> boundary_edges)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      boundary_edges_(std::move(boundary_edges)) {
  const Index n = nodes_.size();
  areas_.reserve(triangles_.size());
  gradients_.reserve(triangles_.size());
  for (Index e = 0; e < triangles_.size(); ++e) {
    const auto& t = triangles_[e];
    for (Index v : t) {
      if (v >= n) throw std::invalid_argument("triangle " + std::to_string(e) + " index out of range");
    }
    const Point& p0 = nodes_[t[0]];
    const Point& p1 = nodes_[t[1]];
    const Point& p2 = nodes_[t[2]];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (!(det > 0.0)) {
      throw std::invalid_argument("triangle " + std::to_string(e) +
                                  " is degenerate or clockwise");
    }
    areas_.push_back(0.5 * det);
    // grad(lambda_a) = rot90(opposite edge) / det
    gradients_.push_back({Point((p1.y() - p2.y()) / det, (p2.x() - p1.x()) / det),
                          Point((p2.y() - p0.y()) / det, (p0.x() - p2.x()) / det),
                          Point((p0.y() - p1.y()) / det, (p1.x() - p0.x()) / det)});
  }
  for (const auto& edge : boundary_edges_) {
    if (edge.nodes[0] >= n || edge.nodes[1] >= n) {
      throw std::invalid_argument("boundary edge index out of range");
    }
    if (edge.marker == EdgeMarker::dirichlet) {
      dirichlet_nodes_.push_back(edge.nodes[0]);
      dirichlet_nodes_.push_back(edge.nodes[1]);
    }
  }
  std::sort(dirichlet_nodes_.begin(), dirichlet_nodes_.end());
  dirichlet_nodes_.erase(std::unique(dirichlet_nodes_.begin(), dirichlet_nodes_.end()),
                         dirichlet_nodes_.end());
}

double TriMesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

TriMesh build_structured_mesh(int nx, int ny, double width, double height,
                              const EdgeMarkerFn& marker) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("structured mesh needs nx, ny >= 1");
  if (!(width > 0.0) || !(height > 0.0)) {
    throw std::invalid_argument("structured mesh needs positive width and height");
  }
  const auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };

  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Pin the last row/column to the exact extent.
      const double x = i == nx ? width : width * i / nx;
      const double y = j == ny ? height : height * j / ny;
      nodes.emplace_back(x, y);
    }
  }

  std::vector<std::array<Index, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Index a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  }

  std::vector<BoundaryEdge> edges;
  const auto add = [&](Index p, Index q) {
    const Point mid = 0.5 * (nodes[p] + nodes[q]);
    edges.push_back({{p, q}, marker ? marker(mid) : EdgeMarker::free});
  };
  for (int i = 0; i < nx; ++i) add(id(i, 0), id(i + 1, 0));
  for (int j = 0; j < ny; ++j) add(id(nx, j), id(nx, j + 1));
  for (int i = nx; i > 0; --i) add(id(i, ny), id(i - 1, ny));
  for (int j = ny; j > 0; --j) add(id(0, j), id(0, j - 1));

  return TriMesh(std::move(nodes), std::move(tris), std::move(edges));
}

SymTensor2 element_strain(const VectorField& u, Index e, const TriMesh& mesh) {
  const auto& t = mesh.triangle(e);
  const auto& grads = mesh.gradients(e);
  SymTensor2 eps;
  for (int a = 0; a < 3; ++a) {
    const double ux = u[2 * t[a]];
    const double uy = u[2 * t[a] + 1];
    eps.xx += ux * grads[a].x();
    eps.yy += uy * grads[a].y();
    eps.xy += 0.5 * (ux * grads[a].y() + uy * grads[a].x());
  }
  return eps;
}

void write_mesh(std::ostream& out, const TriMesh& mesh) {
  out << "nodes " << mesh.node_count() << " triangles " << mesh.triangle_count() << " edges "
      << mesh.boundary_edges().size() << '\n';
  out << std::setprecision(17);
  for (const auto& p : mesh.nodes()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& e : mesh.boundary_edges()) {
    out << e.nodes[0] << ' ' << e.nodes[1] << ' '
        << (e.marker == EdgeMarker::dirichlet ? "dirichlet" : "free") << '\n';
  }
}

namespace {

std::istringstream next_line(std::istream& in, std::size_t& line_no, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(line);
  }
  throw std::runtime_error("mesh: unexpected end of input while reading " + std::string(what));
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw std::runtime_error("mesh line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

TriMesh read_mesh(std::istream& in) {
  std::size_t line_no = 0;
  auto header = next_line(in, line_no, "header");
  std::string kn, kt, ke;
  std::size_t n = 0, m = 0, k = 0;
  if (!(header >> kn >> n >> kt >> m >> ke >> k) || kn != "nodes" || kt != "triangles" ||
      ke != "edges") {
    parse_fail(line_no, "expected 'nodes <n> triangles <m> edges <k>'");
  }
  std::vector<Point> nodes(n);
  for (auto& p : nodes) {
    auto ls = next_line(in, line_no, "nodes");
    if (!(ls >> p.x() >> p.y())) parse_fail(line_no, "expected 'x y'");
  }
  std::vector<std::array<Index, 3>> tris(m);
  for (auto& t : tris) {
    auto ls = next_line(in, line_no, "triangles");
    if (!(ls >> t[0] >> t[1] >> t[2])) parse_fail(line_no, "expected 'i j k'");
  }
  std::vector<BoundaryEdge> edges(k);
  for (auto& e : edges) {
    auto ls = next_line(in, line_no, "edges");
    std::string marker;
    if (!(ls >> e.nodes[0] >> e.nodes[1] >> marker)) parse_fail(line_no, "expected 'i j marker'");
    if (marker == "dirichlet") {
      e.marker = EdgeMarker::dirichlet;
    } else if (marker == "free") {
      e.marker = EdgeMarker::free;
    } else {
      parse_fail(line_no, "unknown edge marker '" + marker + "'");
    }
  }
  return TriMesh(std::move(nodes), std::move(tris), std::move(edges));
}

void write_mesh_file(const std::string& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mesh(out, mesh);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

TriMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh '" + path + "'");
  return read_mesh(in);
}

}  // namespace pff
