#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "km/complex.hpp"

namespace km {

struct NormalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionLimitExceeded : NormalError {
  using NormalError::NormalError;
};

inline const std::string kPeripheralMark = "peripheral_torus";

// Coordinate 7*tet + k: k < 4 counts triangles cutting off vertex k; k = 4, 5, 6
// count quadrilaterals separating {0,1}, {0,2}, {0,3} from the other pair.
int quad_type(int a, int b);   // quad separating {a,b} from the rest, 4..6
bool quad_side0(int q, int a); // a lies on the same side of quad q as vertex 0

struct NormalVector {
  int tets = 0;
  std::vector<mpz_class> v;

  static NormalVector zero(int t);
  const mpz_class& at(int tet, int k) const { return v[7 * tet + k]; }
  mpz_class& at(int tet, int k) { return v[7 * tet + k]; }
  mpz_class max() const;
  bool is_zero() const;

  std::string str() const;  // t=<N>; v=<7N comma-separated integers>
  static NormalVector parse(const std::string& s);

  bool operator==(const NormalVector& o) const { return tets == o.tets && v == o.v; }
  bool operator<(const NormalVector& o) const { return v < o.v; }
};

NormalVector operator*(long k, const NormalVector& x);
NormalVector operator+(const NormalVector& a, const NormalVector& b);

struct MatchingRow {
  int face = -1;  // interior face class
  int corner = 0; // local vertex of the face in its first tetrahedron
  std::vector<std::pair<int, int>> terms;  // (coordinate, +-1)
  int squared_length() const;
};

struct MatchingSystem {
  int tets = 0;
  std::vector<MatchingRow> rows;
  bool satisfied_by(const NormalVector& x) const;
};

MatchingSystem matching_system(const Triangulation& t);

bool is_admissible(const Triangulation& t, const NormalVector& x);

// Normal coordinates of the link of a vertex class: one triangle per corner.
NormalVector vertex_link(const Triangulation& t, int vertex);

struct EnumLimits {
  int max_coordinates = 70;  // 7t
};

// Primitive generators of all admissible extreme rays of the normal cone,
// in lexicographic order.
std::vector<NormalVector> vertex_rays(const Triangulation& t, const EnumLimits& lim = {});

// Extreme rays of {x >= 0, Ax = 0} by double description; rows are sparse.
std::vector<std::vector<mpz_class>> cone_rays(int n, const std::vector<std::vector<std::pair<int, int>>>& rows);

bool hilbert_bound_check(const NormalVector& x);  // max < t 2^{7t+2}
mpz_class vertex_bound(int t);                    // 2^{7t-1}

struct NormalPiece {
  int tet = 0, type = 0, copy = 0;
};

// One piece side on a boundary face, oriented along its curve.
struct BoundaryArc {
  int piece = 0;
  int tet = 0, face = 0, corner = 0, index = 0;
  int from_edge = 0, to_edge = 0;  // edge classes crossed at either end
  int from_local = 0, to_local = 0;  // the other ends of those local edges
};

struct BoundaryCurve {
  std::vector<BoundaryArc> arcs;
  std::string mark;
  std::vector<int> word() const;  // edge classes crossed, in order
  // The curve slid along each edge to its head, as an edge cycle of the host.
  std::vector<std::pair<int, int>> pushed_cycle(const Triangulation& t) const;
};

struct ReconstructedSurface {
  std::vector<NormalPiece> pieces;
  std::vector<std::array<int, 2>> adjacency;  // glued piece pairs, one per interior side
  int vertices = 0, edges = 0, faces = 0;
  int euler_characteristic = 0;
  bool orientable = true;
  int components = 0;
  std::vector<int> component_of;  // per piece
  std::vector<BoundaryCurve> boundary_curves;
  // Quads split along a diagonal; entries are surface vertex ids.
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> triangle_piece;
  std::vector<std::pair<int, int>> vertex_edge;  // per surface vertex: (edge class, position from tail)
};

ReconstructedSurface reconstruct(const Triangulation& t, const NormalVector& x);

// Class of an edge cycle: zero in H1 of the boundary component carrying `mark`,
// or zero in H1 of the whole triangulation (rational tests; both are free here).
bool trivial_on_boundary(const Triangulation& t, const std::vector<int>& cycle, const std::string& mark);
bool trivial_in_manifold(const Triangulation& t, const std::vector<int>& cycle);

struct EssentialDisk {
  NormalVector vector;
  ReconstructedSurface surface;
  std::vector<int> boundary_cycle;  // edge vector of the pushed boundary
};

struct DiskSearch {
  std::optional<EssentialDisk> disk;
  int rays = 0;
  int scanned = 0;
};

DiskSearch search_essential_disk(const Triangulation& t, const EnumLimits& lim = {});
std::optional<EssentialDisk> find_essential_disk(const Triangulation& t, const EnumLimits& lim = {});

enum class Verdict { Unknotted, Knotted, Indeterminate };
std::string to_string(Verdict v);

struct UnknotCertificate {
  Verdict verdict = Verdict::Indeterminate;
  std::optional<EssentialDisk> witness;
  bool longitude = false;  // witness boundary dies in H1 of the manifold
  int rays = 0, scanned = 0;
  int coordinates = 0, limit = 0;
  std::string note;
  double seconds = 0;
  std::string json() const;
};

UnknotCertificate certify_unknot(const Triangulation& t, const EnumLimits& lim = {});

}  // namespace km
