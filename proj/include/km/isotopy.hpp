#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "km/complex.hpp"
#include "km/normalsurf.hpp"

namespace km::iso {

struct IsotopyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A move whose preconditions fail at its application state.
struct MoveError : IsotopyError {
  using IsotopyError::IsotopyError;
};
// No innermost 2-gon / annulus where the procedure needs one.
struct ExhaustionError : IsotopyError {
  using IsotopyError::IsotopyError;
};
struct BudgetExceeded : IsotopyError {
  using IsotopyError::IsotopyError;
};

// ---------------------------------------------------------------------------
// Elementary moves on a polygonal curve carried by a triangle complex.

// Triangles over point ids; each triangle sits inside one tetrahedron.
struct TriangleComplex {
  int points = 0;  // ids 0..points-1 are vertices
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> host;  // tetrahedron per triangle

  int find(int a, int b, int c) const;  // triangle index or -1
  bool has_edge(int a, int b) const;
};

enum class MoveKind { Split, Merge, Slide, Unslide };  // (1), (1'), (2), (2')
std::string to_string(MoveKind k);

// Split: new point d on segment ab.  Merge: erase d from a d b.
// Slide: a d b -> a c b across triangle abc.  Unslide: a c b -> a d b.
struct ElementaryMove {
  MoveKind kind = MoveKind::Split;
  int host = -1;
  int a = -1, b = -1, c = -1, d = -1;
  bool operator==(const ElementaryMove&) const = default;
};

struct CurveState {
  std::vector<int> points;                  // cyclic, no repeats
  std::map<int, std::array<int, 2>> aux;    // points off the vertex set: the segment they lie on
  int next_id = 0;                          // first unused id

  bool operator==(const CurveState&) const = default;
};

CurveState initial_state(const TriangleComplex& s, std::vector<int> points);
void apply_elementary(const TriangleComplex& s, CurveState& k, const ElementaryMove& m);

struct BasicMove {
  int kind = 1;   // 1, 2, 3 (plus 4: a type 1 move landing on the other curve)
  int curve = 0;  // 0 alpha, 1 beta
  int index = 0;  // crossing point (kinds 1, 2, 4) or arc (kind 3)
  int end = 0;    // kind 2: end of the edge slid over
  long cost = 0;  // elementary moves charged
  bool operator==(const BasicMove&) const = default;
};

struct MoveScript {
  std::vector<ElementaryMove> moves;
  std::vector<BasicMove> basic;
  // (moves applied so far, curve after them)
  std::vector<std::pair<int, std::vector<int>>> checkpoints;
  CurveState initial;

  std::map<std::string, long> counts() const;
  long elementary_cost() const;  // elementary moves, or the charge for basic moves
  std::string text() const;      // one move per line
  std::string counts_json() const;
};

// Replays every move from `initial`, checking each checkpoint; returns the final curve.
CurveState replay(const TriangleComplex& s, const MoveScript& m);

// Boundary of a triangle set as cycles of point ids (throws unless every edge
// lies on one or two triangles and boundary vertices have degree two).
std::vector<std::vector<int>> boundary_cycles(const std::vector<std::array<int, 3>>& tris);
int euler_characteristic(const std::vector<std::array<int, 3>>& tris);

struct DiskContraction {
  MoveScript script;
  std::vector<int> order;  // triangles in removal order; the last one remains
};

DiskContraction contract_disk(const TriangleComplex& disk);
TriangleComplex surface_complex(const ReconstructedSurface& s);
DiskContraction contract_disk(const ReconstructedSurface& s);

// Carries one boundary component of an annulus (all vertices on its boundary)
// to the other across its triangles.
MoveScript pull_across_annulus(const TriangleComplex& annulus, const std::vector<int>& from);

// ---------------------------------------------------------------------------
// Longitudes.

// mu[i - 1] is the link of the core edge [w_{i-1}, w_i] in R, as a vertex cycle.
std::vector<PLCurve> meridians(const Triangulation& t, const SolidTorusNbhd& r);

struct ParallelCurve {
  PLCurve alpha;              // starts at x_0 on mu_1
  int first_edge = 0;         // alpha[first_edge] = x_1, alpha[first_edge + 1] = v
  TriangleComplex annulus;    // triangles of t; boundary alpha and the core
};

ParallelCurve parallel_curve(const Triangulation& t, const SolidTorusNbhd& r);

struct TwistSolve {
  mpz_class k;
  int faces = 0;       // independent face boundaries used
  mpz_class det;       // determinant of the square subsystem
  mpz_class bound;     // ceil((f + 1) 3^{f/2})
  bool within_bound = false;
};

// The unique k with alpha + k mu a boundary in m.
TwistSolve twist_count(const Triangulation& m, const std::vector<int>& alpha, const std::vector<int>& mu);

struct Longitude {
  std::vector<int> points;   // cyclic; ids >= t.vertices() are spiral points
  std::vector<int> shadow;   // spiral point id - t.vertices() -> vertex it is pushed onto
  TriangleComplex annulus;   // boundary: the longitude and the core
  long k = 0;
  int ell = 0;
  int removed = -1;          // triangle of the parallel annulus replaced by the spiral cone
};

// Oriented meridian mu_2 in the direction the spiral turns for k > 0.
std::vector<int> spiral_meridian(const Triangulation& t, const SolidTorusNbhd& r, const ParallelCurve& p);
Longitude build_longitude(const Triangulation& t, const SolidTorusNbhd& r, const ParallelCurve& p, long k,
                          long max_points = 200000);
// Closed walk in the 1-skeleton of t obtained by pushing spiral points to their shadows.
std::vector<int> pushed_walk(const Longitude& l);

// ---------------------------------------------------------------------------
// Curves on a triangulated orientable surface.

// Triangle i has corners corner[i][0..2] counterclockwise; side s joins corners
// s and s + 1.  Glued sides run in opposite directions.
class TriSurface {
 public:
  TriSurface() = default;
  // edge[i][s] and sign[i][s] (+1 when side s runs along the edge direction).
  TriSurface(std::vector<std::array<int, 3>> corner, std::vector<std::array<int, 3>> edge,
             std::vector<std::array<int, 3>> sign);
  static TriSurface from_triples(const std::vector<std::array<int, 3>>& tris);
  // face_of: triangle -> face class; vertex_of: surface vertex -> vertex class.
  static TriSurface boundary_of(const Triangulation& t, const std::string& mark, std::vector<int>* face_of = nullptr,
                                std::vector<int>* vertex_of = nullptr);

  int triangles() const { return static_cast<int>(corner_.size()); }
  int vertices() const { return nv_; }
  int edges() const { return ne_; }
  int corner(int i, int k) const { return corner_[i][k]; }
  int edge(int i, int s) const { return edge_[i][s]; }
  std::pair<int, int> across(int i, int s) const { return across_[i][s]; }
  std::pair<int, int> canonical_side(int e) const { return canon_[e]; }
  bool is_canonical(int i, int s) const { return canon_[edge_[i][s]] == std::make_pair(i, s); }
  int valence(int v) const { return valence_[v]; }
  int max_valence() const;
  int euler() const { return nv_ - ne_ + triangles(); }
  // Corner after (i, k) counterclockwise around its vertex.
  std::pair<int, int> next_around(int i, int k) const;
  std::pair<int, int> prev_around(int i, int k) const;
  // Vertex at one end of edge e (0: start of the canonical side).
  int edge_end(int e, int end) const;
  std::vector<std::array<int, 3>> corner_table() const { return corner_; }

 private:
  std::vector<std::array<int, 3>> corner_, edge_;
  std::vector<std::array<std::pair<int, int>, 3>> across_;
  std::vector<std::pair<int, int>> canon_;
  std::vector<int> valence_;
  int nv_ = 0, ne_ = 0;
};

struct CurvePoint {
  int edge = 0;
  mpq_class pos;  // in (0, 1) along the canonical side
  bool operator==(const CurvePoint&) const = default;
};

struct SurfaceArc {
  int tri = 0, in = 0, out = 0;  // sides of tri
  bool operator==(const SurfaceArc&) const = default;
};

// A basic curve: arc i runs in arcs[i].tri from points[i] to points[i + 1].
struct SurfaceCurve {
  std::vector<CurvePoint> points;
  std::vector<SurfaceArc> arcs;

  int length() const { return static_cast<int>(points.size()); }
  std::vector<int> word() const;     // edges crossed in order
  std::vector<int> returns() const;  // arcs with both ends on one side
  std::string str() const;
  bool operator==(const SurfaceCurve&) const = default;
};

void check_curve(const TriSurface& f, const SurfaceCurve& c);  // consistent and embedded
bool is_embedded(const TriSurface& f, const SurfaceCurve& c);
int intersections(const TriSurface& f, const SurfaceCurve& a, const SurfaceCurve& b);
// A parallel copy just to the left of c (disjoint from it).
SurfaceCurve push_off(const TriSurface& f, const SurfaceCurve& c, const std::vector<const SurfaceCurve*>& avoid = {});
// Edge-cycle vector of c slid to the start of each crossed edge.
std::vector<int> homology_vector(const TriSurface& f, const SurfaceCurve& c);

struct BasicResult {
  SurfaceCurve curve;
  long cost = 0;
  int length_change = 0;
};

// kind 1: slide point `index` to `pos` along its edge, possibly past points of
// `others`; kind 2: slide point `index` over the vertex at `end` of its edge;
// kind 3: push return arc `index` across its edge.  Kinds 2 and 3 may not
// sweep over points of `others`.
BasicResult apply_basic_move(const TriSurface& f, const SurfaceCurve& c, int kind, int index, int end = 0,
                             const mpq_class& pos = 0, const std::vector<const SurfaceCurve*>& others = {});

struct SurfaceWalk {
  std::vector<int> vertices;  // closed embedded path in the 1-skeleton
};

struct BasicConversion {
  SurfaceCurve curve;
  MoveScript script;  // perturbation and straightening charges
  long perturb_type2 = 0, straighten_type2 = 0;
  std::vector<int> crossings_at;  // per walk vertex
};

BasicConversion to_basic(const TriSurface& f, const SurfaceWalk& w);
BasicConversion to_basic(const TriSurface& f, const SurfaceCurve& c);

struct IsotopyLimits {
  long max_basic_moves = 0;  // 0: the l^4 u V budget
};

struct SurfaceIsotopy {
  MoveScript script;
  SurfaceCurve alpha, beta;      // inputs
  SurfaceCurve result;           // common final curve
  long basic_moves = 0, elementary_moves = 0;
  std::vector<int> round_intersections;  // before each 2-gon round, then final
  int rounds = 0;
  int length = 0, triangles = 0, valence = 0;  // l, u, V
  mpz_class basic_budget, elementary_budget;   // l^4 u V and 17 l^4 u^3
};

SurfaceIsotopy isotope_on_surface(const TriSurface& f, const SurfaceCurve& alpha, const SurfaceCurve& beta,
                                  const IsotopyLimits& lim = {});
// Replays a surface script from (alpha, beta); returns the final pair.
std::array<SurfaceCurve, 2> replay_surface(const TriSurface& f, const SurfaceCurve& alpha, const SurfaceCurve& beta,
                                           const MoveScript& m);

}  // namespace km::iso
