#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "km/complex.hpp"
#include "km/diagram.hpp"
#include "km/project.hpp"

namespace km {

struct EmbedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A triangulated sphere given by oriented triangles: every directed edge lies
// in exactly one triangle, and each triangle runs counterclockwise.
using Tri = std::array<int, 3>;

struct AugmentedGraph {
  Diagram base;
  int crossings = 0;                 // vertices 0 .. crossings-1 are the crossings
  int m = 0;                         // crossings + special vertices
  std::vector<int> near;             // dart -> special vertex next to it
  std::vector<std::array<int, 3>> loop_triangles;  // specials of each isolated loop
  std::vector<std::array<int, 2>> graph_edges;     // edges of G (knot edges)
  std::vector<Tri> triangles;        // faces of the framed graph H', outer face included
  std::array<int, 3> frame{};        // outer triangle, counterclockwise
  int vertices() const { return m + 3; }
  std::vector<std::array<int, 2>> edges() const;  // all edges of H'
};

AugmentedGraph augment(const Diagram& d);

// Throws EmbedError unless the triangle list is a simple triangulated sphere.
void check_sphere(const std::vector<Tri>& tris, int vertices);

struct GridEmbedding {
  std::vector<std::array<std::int64_t, 2>> xy;
  std::int64_t side = 0;  // all coordinates lie in [0, side]
};

// Straight-line grid drawing of a triangulated sphere with the given outer
// face; coordinates in [0, V-2] (Schnyder's vertex-counting embedding).
GridEmbedding grid_embed(const std::vector<Tri>& tris, int vertices, const std::array<int, 3>& outer);
GridEmbedding grid_embed(const AugmentedGraph& g);

// Exact checks: every bounded face is counterclockwise and no two edges cross.
bool is_planar_drawing(const std::vector<Tri>& tris, const std::array<int, 3>& outer,
                       const GridEmbedding& e, std::string* why = nullptr);

// Prism labels: layer vertices, one point per (edge, slab) and one centre per
// (face, slab). Layers sit at z = -3, -1, 1, 3; x and y are scaled by 3.
struct PrismComplex {
  std::vector<std::array<int, 4>> tets;  // over labels
  std::vector<Point3> label_coords;
  int layer_label(int v, int layer) const { return layer * vertices + v; }
  int point_label(int v, int w, int slab) const;
  int vertices = 0;
  int point_base = 0, centre_base = 0;
  std::vector<std::array<int, 2>> edges;  // sorted H' edges
  int bounded_faces = 0;
};

PrismComplex build_prisms(const AugmentedGraph& g, const GridEmbedding& e, int slabs = 3);

struct EmbeddedComplement {
  Triangulation polytope;
  std::vector<PLCurve> knot;       // one curve per link component (vertex classes)
  SpaceLink link;                  // the same curves as coordinates
  std::vector<std::array<int, 2>> crossing_columns;  // crossing -> (under, over) vertex class
  int n = 0, m = 0, prisms = 0;
  std::string certificate() const;  // JSON
  // bound checks
  bool tet_bound_ok = false;        // t <= 840n
  bool exact_count_ok = false;      // t == 84(m+1)
  bool box_ok = false;              // 0<=x<=30n, 0<=y<30n, -6<=z<=6
  bool interior_ok = false;         // knot avoids the polytope boundary
  bool convex_ok = false;
  bool projection_ok = false;       // regular and isomorphic to the input
  std::string projection_witness;
};

// Knot routed through the middle slab: crossings lift the over strand to
// z = 1 through the rectangle points, everything else stays at z = -1.
std::vector<std::vector<int>> route_knot(const AugmentedGraph& g, const PrismComplex& p);

EmbeddedComplement build_complement_input(const Diagram& d);

// Integral tetrahedron count of the construction: 14 per prism, 3 slabs.
inline long construction_tets(int m) { return 42L * (2 * m + 1); }

}  // namespace km
