#pragma once
// Shared between the surface-curve code and the 2-gon isotopy.

#include <vector>

#include "km/isotopy.hpp"

namespace km::iso::detail {

// Parameter along side (tri, side) running from corner side to corner side + 1.
mpq_class side_param(const TriSurface& f, int tri, int side, const mpq_class& pos);
// Counterclockwise boundary coordinate in [0, 3).
mpq_class boundary_coord(const TriSurface& f, int tri, int side, const mpq_class& pos);
// Chords with distinct endpoints cross iff their endpoints alternate.
bool links(const mpq_class& a0, const mpq_class& a1, const mpq_class& b0, const mpq_class& b1);

struct MoveResult {
  SurfaceCurve curve;
  long cost = 0;
  int length_change = 0;
  std::vector<int> arc_map;  // old arc -> new arc carrying it, or -1
};

MoveResult slide_point(const TriSurface& f, const SurfaceCurve& c, int i, const mpq_class& pos);
MoveResult over_vertex(const TriSurface& f, const SurfaceCurve& c, int i, int end,
                       const std::vector<const SurfaceCurve*>& others);
MoveResult across_bigon(const TriSurface& f, const SurfaceCurve& c, int arc,
                        const std::vector<const SurfaceCurve*>& others);

constexpr long kType1Cost = 28;
constexpr long kType3Cost = 22;
inline long type2_cost(int valence) { return 6L * valence + 24; }

}  // namespace km::iso::detail
