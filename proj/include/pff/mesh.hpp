#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pff/tensor.hpp"

namespace pff {

using Index = std::size_t;
using Point = Eigen::Vector2d;

/// Nodal phase field, one value per node.
using ScalarField = Eigen::VectorXd;
/// Nodal displacement, interleaved (u_x, u_y) per node.
using VectorField = Eigen::VectorXd;

enum class EdgeMarker { dirichlet, free };

struct BoundaryEdge {
  std::array<Index, 2> nodes;
  EdgeMarker marker = EdgeMarker::free;
};

/// P1 triangulation. Element areas and barycentric gradients are
/// precomputed; the mesh is immutable after construction.
class TriMesh {
 public:
  TriMesh(std::vector<Point> nodes, std::vector<std::array<Index, 3>> triangles,
          std::vector<BoundaryEdge> boundary_edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t triangle_count() const { return triangles_.size(); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<Index, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  const Point& node(Index i) const { return nodes_[i]; }
  const std::array<Index, 3>& triangle(Index e) const { return triangles_[e]; }
  double area(Index e) const { return areas_[e]; }
  /// Gradients of the three barycentric basis functions on element e.
  const std::array<Point, 3>& gradients(Index e) const { return gradients_[e]; }

  double total_area() const;

  /// Sorted, unique nodes lying on a Dirichlet edge.
  const std::vector<Index>& dirichlet_nodes() const { return dirichlet_nodes_; }
  bool has_dirichlet() const { return !dirichlet_nodes_.empty(); }

 private:
  std::vector<Point> nodes_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<double> areas_;
  std::vector<std::array<Point, 3>> gradients_;
  std::vector<Index> dirichlet_nodes_;
};

/// Maps a boundary-edge midpoint to its marker.
using EdgeMarkerFn = std::function<EdgeMarker(const Point&)>;

/// Rectangle [0, width] x [0, height] split into nx x ny cells, each cut
/// along its lower-left to upper-right diagonal. Node (i, j) has index
/// j * (nx + 1) + i.
TriMesh build_structured_mesh(int nx, int ny, double width, double height,
                              const EdgeMarkerFn& marker = {});

/// Symmetric gradient of the P1 interpolant of u on element e.
SymTensor2 element_strain(const VectorField& u, Index e, const TriMesh& mesh);

/// ASCII mesh format: "nodes <n> triangles <m> edges <k>", then n lines
/// "x y", m lines "i j k", k lines "i j marker" (marker: dirichlet|free).
void write_mesh(std::ostream& out, const TriMesh& mesh);
TriMesh read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const TriMesh& mesh);
TriMesh read_mesh_file(const std::string& path);

}  // namespace pff
