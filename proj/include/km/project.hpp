#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "km/diagram.hpp"

namespace km {

struct IrregularProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SweepDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidElementaryMove : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using QPoint = std::array<mpq_class, 3>;

// A polygonal link in R^3: each component is a cyclic vertex list.
struct SpaceLink {
  std::vector<std::vector<QPoint>> comps;
  int segments() const;  // |L|
};

struct SegmentId {
  int comp = 0, index = 0;  // segment from vertex index to index+1
  bool operator==(const SegmentId&) const = default;
};

struct CrossingRecord {
  SegmentId under, over;
  mpq_class s_under, s_over;  // parameters along the segments (0 = at the start vertex)
  std::array<mpq_class, 2> point;
};

struct ProjectionReport {
  bool regular = false;
  std::string witness;  // first degeneracy found
  std::vector<CrossingRecord> crossings;
  Diagram diagram;
};

// Vertical projection with exact regularity checks. Two strands may cross at a
// vertex of each as long as their four directions alternate.
ProjectionReport project(const SpaceLink& l);
Diagram project_diagram(const SpaceLink& l);  // throws IrregularProjection

// (x, y, z) -> (N^2 x + N z, N^2 y + z, z): an integral rescaling of
// (x + z/N, y + z/N^2, z).
SpaceLink shear(const SpaceLink& l, long n);
// Smallest N = 2^k (k >= 1) whose shear projects regularly.
long regular_shear(const SpaceLink& l, long max_n = 1L << 40);
SpaceLink perturb_regular(const SpaceLink& l);

enum class ElementaryKind { Split, Merge, Insert, Remove };

// Split (1): add `point` inside segment index. Merge (1'): drop the straight
// vertex index. Insert (2): replace segment index by two through `point`.
// Remove (2'): replace the two segments at vertex index by one.
struct ElementaryMove {
  ElementaryKind kind = ElementaryKind::Split;
  int comp = 0;
  int index = 0;
  QPoint point{};
};

std::string to_string(const ElementaryMove& m);
// Applies a move after checking its geometric precondition: for (2)/(2'),
// the triangle spanned meets the link only along the moving segments.
SpaceLink apply_elementary(const SpaceLink& l, const ElementaryMove& m);

struct TranslateStats {
  int events = 0;         // critical sweep parameters
  int fallback_searches = 0;
};

// Reidemeister moves carrying `before` (a diagram isomorphic to the projection
// of l) to a diagram isomorphic to the projection after m.
std::vector<Move> translate_move(const SpaceLink& l, const ElementaryMove& m, Diagram& carried,
                                 TranslateStats* stats = nullptr);

struct StepReport {
  int link_size = 0;     // |L_i| before the move
  int crossing_measure = 0;  // |D_i| before the move
  int moves = 0;
  int events = 0;
  long budget = 0;  // 2|L_i| + 2|D_i|
};

struct TranslationReport {
  long shear = 1;
  int n = 0, k = 0;
  std::vector<StepReport> steps;
  std::vector<int> sizes;  // |L_0| .. |L_k|
  long total = 0;
  mpz_class bound;  // 2k(n + k/2 + 1)^2
  bool step_budgets_ok = true;
  bool diagram_bound_ok = true;   // |D_i| <= |L_i|^2
  bool growth_ok = true;          // |L_i| <= n + i
  bool symmetric_growth_ok = true;  // |L_i| <= n + k - i (needs |L_k| <= n)
  bool total_ok = true;
  MoveScript script;
  std::string json() const;
};

TranslationReport translate_script(const SpaceLink& l, const std::vector<ElementaryMove>& s);

}  // namespace km
