#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifem/geometry.hpp"

namespace ifem {

enum class VertexClass : unsigned char { Interior, Boundary, OnInterface, BoundaryAndInterface };

inline constexpr bool is_boundary(VertexClass c) {
  return c == VertexClass::Boundary || c == VertexClass::BoundaryAndInterface;
}
inline constexpr bool is_interface(VertexClass c) {
  return c == VertexClass::OnInterface || c == VertexClass::BoundaryAndInterface;
}

struct Edge {
  int a = -1, b = -1;  // a < b
  int left = -1;       // adjacent triangles; right == -1 on the domain boundary
  int right = -1;
};

/// Body-fitted triangulation.
///
/// Triangles are stored counterclockwise with the newest vertex first, so the
/// refinement edge of triangle t is (triangles[t][1], triangles[t][2]).
/// The topology arrays (edges, vertex-to-triangle lists) are derived data and
/// must be refreshed with rebuild_topology() after any structural change.
struct Mesh {
  Rect domain;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<RegionTag> triangle_region;
  std::vector<VertexClass> vertex_class;
  std::vector<int> generation;

  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> triangle_edges;  // edge opposite local vertex k
  std::vector<int> vt_offsets;
  std::vector<int> vt_list;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  void rebuild_topology();

  std::span<const int> triangles_of(int v) const {
    return {vt_list.data() + vt_offsets[v], vt_list.data() + vt_offsets[v + 1]};
  }
  /// An edge whose two neighbours carry different region tags (a piece of Gamma_h).
  bool is_interface_edge(int e) const {
    const Edge& ed = edges[e];
    return ed.right >= 0 && triangle_region[ed.left] != triangle_region[ed.right];
  }

  double signed_area(int t) const;
  double diameter(int t) const;
  Point2 centroid(int t) const;
  std::array<Point2, 3> corners(int t) const {
    const auto& tri = triangles[t];
    return {vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]};
  }
  /// Side of a vertex: its triangles' tag for off-interface vertices, Minus on the interface.
  RegionTag vertex_region(int v) const;
  /// True when v lies on a triangle of region r.
  bool touches_region(int v, RegionTag r) const;
};

struct BuildOptions {
  /// Pick the square diagonal that avoids crossing the interface when possible.
  bool adapt_diagonals = true;
  /// Reject a snap that shrinks an incident triangle below this fraction of its area.
  double min_area_ratio = 0.2;
};

/// Uniform right-triangle mesh of n x n squares, "/" diagonals, no classification.
Mesh build_uniform_mesh(Rect domain, int n_per_side);

/// Background grid + vertex snapping onto the zero level set, then classify().
/// Throws UnresolvedInterface when the grid is too coarse.
Mesh build_fitted_mesh(const LevelSet& ls, Rect domain, int n_per_side, const BuildOptions& opts = {});

/// Fill vertex classes and triangle regions from phi. Throws AmbiguousElement.
void classify(Mesh& mesh, const LevelSet& ls);

/// Newest-vertex bisection of the marked triangles with conforming closure.
/// Midpoints of interface edges are projected onto the interface. If that
/// leaves a triangle inverted or below 1 degree, nearby free vertices are
/// smoothed; UnresolvedInterface if this fails. When new_vertex_parents is
/// given it receives the edge endpoints of every new vertex.
Mesh bisect(const Mesh& mesh, std::span<const int> marked, const LevelSet& ls,
            std::vector<std::array<int, 2>>* new_vertex_parents = nullptr);

/// Uniform quadrisection (red refinement) with interface midpoints projected.
Mesh refine_uniform(const Mesh& mesh, const LevelSet& ls,
                    std::vector<std::array<int, 2>>* new_vertex_parents = nullptr);

/// Sampling nodes of L(center, n), optionally confined to one region.
struct Patch {
  int center = -1;
  std::vector<int> node_set;   // sorted, contains center
  std::vector<int> triangles;  // sorted
  int layer_count = 0;
};

Patch layers(const Mesh& mesh, int z, int n, std::optional<RegionTag> restrict_to = std::nullopt);

struct MeshCheck {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Conformity, orientation, fittedness, interface tolerance, Gamma_h polyline
/// structure and Euler characteristic.
MeshCheck check_invariants(const Mesh& mesh, const LevelSet& ls);

double min_angle_degrees(const Mesh& mesh);
double max_diameter(const Mesh& mesh);
double min_diameter(const Mesh& mesh);
std::size_t count_interface_vertices(const Mesh& mesh);

void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace ifem
