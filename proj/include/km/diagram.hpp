#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace km {

struct DiagramSyntaxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DiagramValidityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MoveMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SearchLimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A dart is an edge-end at a crossing, encoded as 4*crossing + slot.
// Slots run counterclockwise; slots 0 and 2 are the under-strand, 1 and 3 the
// over-strand, so a strand passes straight through from slot s to slot s^2.
inline int dart(int c, int s) { return 4 * c + (s & 3); }
inline int dart_crossing(int d) { return d >> 2; }
inline int dart_slot(int d) { return d & 3; }
inline bool dart_over(int d) { return (d & 1) != 0; }
inline int dart_turn(int d, int k) { return 4 * (d >> 2) + ((d + k) & 3); }

class Diagram {
 public:
  Diagram() = default;
  // mate[d] is the dart joined to d by an edge; loops counts vertex-free components.
  Diagram(std::vector<int> mate, int loops);

  int crossings() const { return static_cast<int>(mate_.size() / 4); }
  int darts() const { return static_cast<int>(mate_.size()); }
  int loops() const { return loops_; }
  int mate(int d) const { return mate_[d]; }
  const std::vector<int>& mates() const { return mate_; }

  // Faces as cycles of darts; each dart bounds the face on its left while
  // walking from it to its mate. Ids follow discovery order over ascending
  // darts, and each cycle starts at its smallest dart.
  const std::vector<std::vector<int>>& faces() const;
  int face_of(int d) const;

  // Connected components of the underlying 4-valent graph (crossing lists).
  std::vector<std::vector<int>> graph_components() const;

  bool operator==(const Diagram& o) const { return mate_ == o.mate_ && loops_ == o.loops_; }

 private:
  std::vector<int> mate_;
  int loops_ = 0;
  mutable std::vector<std::vector<int>> faces_;
  mutable std::vector<int> face_of_;
  mutable bool faces_ready_ = false;
  void build_faces() const;
};

Diagram parse_diagram(const std::string& text);
// Canonical text: crossings relabelled by canonical traversal.
std::string serialize(const Diagram& d);
// Text in the diagram's own labelling (edge ids from dart order).
std::string serialize_raw(const Diagram& d);

void validate(const Diagram& d);  // throws DiagramValidityError

int crossing_measure(const Diagram& d);
bool is_trivial(const Diagram& d);
bool is_knot(const Diagram& d);

// A link component is a closed strand; listed as the darts through which it
// leaves crossings, in travel order. Vertex-free loops are not listed here.
struct Strand {
  std::vector<int> out_darts;
};
std::vector<Strand> strands(const Diagram& d);
int link_components(const Diagram& d);

// Orientation: +1 follows each strand as returned by strands(), -1 reverses.
int crossing_sign(const Diagram& d, int crossing, const std::vector<int>& orientation);
int writhe(const Diagram& d, const std::vector<int>& orientation = {});

// Canonical form: equal iff the diagrams are isomorphic by an
// orientation-preserving relabelling of crossings that keeps over/under.
using CanonCode = std::vector<int>;
CanonCode canonical_code(const Diagram& d);
bool isomorphic(const Diagram& a, const Diagram& b);
Diagram canonical(const Diagram& d);

enum class MoveKind { R1Plus, R1Minus, R2Plus, R2Minus, R3 };

struct Move {
  MoveKind kind = MoveKind::R1Minus;
  int face = -1;          // face id; -1 when acting on an isolated loop
  int loop = -1;          // loop index for loop moves
  // Positions in the face's dart cycle. R2+ variants: arcs {i, i} pushes an
  // arc across itself, a face with a loop pushes that loop across arc {i},
  // on loops alone {k} names a second loop, and
  // with other_face set arcs[1] lies on that face of another piece.
  std::vector<int> arcs;
  int sign = +1;          // R1+: sign of the new crossing
  bool over = true;       // R2+: first arc passes over the second
  int other_face = -1;    // R2+ across two split pieces: the face holding arcs[1]

  bool operator==(const Move&) const = default;
};

std::string to_string(const Move& m);
Move parse_move(const std::string& line);

struct MoveResult {
  Diagram diagram;
  Move inverse;
};

MoveResult apply_move(const Diagram& d, const Move& m);

// Every move applicable to d, R1+ and R2+ included.
std::vector<Move> all_moves(const Diagram& d);
// Only the moves that do not raise the crossing count.
std::vector<Move> reducing_moves(const Diagram& d);

struct MoveScript {
  Diagram start;
  std::vector<Move> moves;
};

std::string write_script(const MoveScript& s, int checkpoint_every = 100);
MoveScript read_script(const std::string& text);
// Replays a script, checking every checkpoint; returns the final diagram.
Diagram replay(const MoveScript& s);

struct BfsLimits {
  int max_crossings = 6;
  int max_depth = 6;
  std::size_t max_states = 2'000'000;
};

// Shortest move sequence reaching the trivial diagram, or nothing when the
// bounded search space is exhausted. Throws SearchLimitExceeded on max_states.
std::optional<std::vector<Move>> bfs_untangle(const Diagram& d, const BfsLimits& lim);

// Shortest sequence turning a into a diagram isomorphic to b.
std::optional<std::vector<Move>> bfs_connect(const Diagram& a, const Diagram& b,
                                             const BfsLimits& lim);

}  // namespace km
