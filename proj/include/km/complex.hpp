#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace km {

struct TriangulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Permutation of {0,1,2,3}; p[i] is the image of i.
struct Perm4 {
  std::array<std::uint8_t, 4> p{0, 1, 2, 3};
  int operator[](int i) const { return p[i]; }
  Perm4 inverse() const;
  Perm4 operator*(const Perm4& o) const;  // (a*b)[i] = a[b[i]]
  int sign() const;
  int index() const;  // position in lexicographic order of S4
  static Perm4 from_index(int i);
  std::string str() const;
  static Perm4 parse(const std::string& s);
  bool operator==(const Perm4&) const = default;
};

struct Gluing {
  int tet = -1;   // -1: boundary face
  int face = -1;
  Perm4 perm;     // vertex correspondence: local vertex i of this tet -> perm[i] of target
  std::string mark;
  bool boundary() const { return tet < 0; }
};

using Point3 = std::array<std::int64_t, 3>;

struct Provenance {
  int depth = 0;     // number of barycentric subdivisions applied
  int base_tets = 0; // tetrahedra of the manifold before subdividing
};

// Local edge numbering: edge k joins kEdgeVerts[k][0] < kEdgeVerts[k][1].
extern const int kEdgeVerts[6][2];
int local_edge(int a, int b);

class Triangulation {
 public:
  Triangulation() = default;
  explicit Triangulation(std::vector<std::array<Gluing, 4>> gluings);

  int size() const { return static_cast<int>(glue_.size()); }
  const Gluing& gluing(int t, int f) const { return glue_[t][f]; }
  const std::vector<std::array<Gluing, 4>>& gluings() const { return glue_; }

  int vertices() const { return nv_; }
  int edges() const { return ne_; }
  int faces() const { return nf_; }

  int vertex(int t, int v) const { return vclass_[4 * t + v]; }
  int edge(int t, int e) const { return eclass_[6 * t + e]; }
  // +1 if local edge e (low->high vertex) agrees with the class orientation.
  int edge_sign(int t, int e) const { return esign_[6 * t + e]; }
  int face(int t, int f) const { return fclass_[4 * t + f]; }

  // A representative (tet, local index) for each class.
  std::pair<int, int> vertex_rep(int v) const { return vrep_[v]; }
  std::pair<int, int> edge_rep(int e) const { return erep_[e]; }
  std::pair<int, int> face_rep(int f) const { return frep_[f]; }
  std::array<int, 2> edge_ends(int e) const;  // tail, head vertex classes

  bool face_is_boundary(int f) const;
  bool vertex_on_boundary(int v) const { return vbd_[v] != 0; }
  int interior_faces() const;

  // Optional integer coordinates per vertex class.
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<Point3>& coords() const { return coords_; }
  void set_coords(std::vector<Point3> c);

  Provenance provenance;
  // Named edge cycles carried with the file (e.g. a fixture meridian), as
  // (edge class, +1/-1) steps.
  std::map<std::string, std::vector<std::pair<int, int>>> cycles;

  // Edge class joining two vertex classes; nullopt if none, throws if several.
  std::optional<int> edge_between(int u, int v) const;
  bool is_simplicial() const;

  struct BoundaryComponent {
    std::vector<int> faces;  // face classes
    int euler = 0;
    bool orientable = true;
    std::string mark;
  };
  std::vector<BoundaryComponent> boundary_components() const;

  // Throws unless every vertex link is a sphere or disk and marks are consistent.
  void check_manifold() const;

 private:
  std::vector<std::array<Gluing, 4>> glue_;
  std::vector<int> vclass_, eclass_, esign_, fclass_;
  std::vector<std::pair<int, int>> vrep_, erep_, frep_;
  std::vector<char> vbd_;
  std::vector<Point3> coords_;
  std::multimap<std::pair<int, int>, int> edge_lookup_;
  int nv_ = 0, ne_ = 0, nf_ = 0;
  void build();
};

Triangulation read_triangulation(const std::string& text);
std::string write_triangulation(const Triangulation& t);

// Builds a triangulation from tetrahedra given as vertex quadruples; faces
// shared by two tetrahedra are glued, the rest become boundary with `mark`.
Triangulation from_simplices(const std::vector<std::array<int, 4>>& tets, const std::string& mark,
                             std::vector<int>* vertex_of_label = nullptr);

struct SubdivisionMap {
  std::vector<int> vertex;  // old vertex class -> new vertex class
  std::vector<int> edge;    // old edge class -> new vertex at its barycentre
  std::vector<int> face;
  std::vector<int> tet;
};

Triangulation barycentric_subdivide(const Triangulation& t, SubdivisionMap* map = nullptr);

struct PLCurve {
  std::vector<int> vertices;  // cyclic; consecutive vertices share an edge
};

void check_curve(const Triangulation& t, const PLCurve& k);

// Curve sections: one `knot v0 v1 ...` line per component.
std::string write_knot(const std::vector<PLCurve>& k);
std::vector<PLCurve> read_knot(const std::string& text);
// Image of a curve under subdivision: every edge gains its midpoint.
PLCurve subdivide_curve(const Triangulation& t, const SubdivisionMap& m, const PLCurve& k);

struct SolidTorusNbhd {
  std::vector<int> tets;              // closed star of the core
  std::vector<std::pair<int, int>> peripheral;  // (tet, face) of R glued outside R
  std::vector<int> core;              // w_0 .. w_{s-1}
  int euler = 0;
};

SolidTorusNbhd regular_neighborhood(const Triangulation& t, const PLCurve& k);

struct Complement {
  Triangulation tri;
  std::vector<int> tet_map;     // old tet -> new tet or -1
  std::vector<int> vertex_map;  // old vertex class -> new vertex class or -1
};

Complement truncated_complement(const Triangulation& t, const SolidTorusNbhd& r);

struct SparseMatrix {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, int>>> col;  // (row, value), rows ascending
};

SparseMatrix boundary_matrix(const Triangulation& t);   // edges x faces
SparseMatrix vertex_edge_matrix(const Triangulation& t);  // vertices x edges
SparseMatrix face_tet_matrix(const Triangulation& t);     // faces x tetrahedra

// Signed edge vector of a closed vertex path.
std::vector<int> cycle_vector(const Triangulation& t, const PLCurve& c);
std::vector<int> cycle_vector(const Triangulation& t, const std::vector<std::pair<int, int>>& steps);

struct Homology {
  int betti = 0;
  std::vector<long> torsion;
};
// Dense Smith form; intended for small triangulations.
Homology first_homology(const Triangulation& t);

}  // namespace km
