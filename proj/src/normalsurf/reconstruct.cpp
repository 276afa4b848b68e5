#include <map>
#include <numeric>

#include "km/normalsurf.hpp"

namespace km {

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

struct Side {
  int piece, tet, face, corner, index;
  int u1, u2;      // traversal runs from the corner on (corner,u1) to (corner,u2)
  int p1, p2;      // raw point ids of those corners
  int partner = -1;
};

long to_long(const mpz_class& c) {
  if (!c.fits_slong_p()) throw NormalError("coordinate too large to reconstruct");
  return c.get_si();
}

}  // namespace

std::vector<int> BoundaryCurve::word() const {
  std::vector<int> w;
  for (auto& a : arcs) w.push_back(a.to_edge);
  return w;
}

std::vector<std::pair<int, int>> BoundaryCurve::pushed_cycle(const Triangulation& t) const {
  std::vector<std::pair<int, int>> steps;
  auto head = [&](int tet, int a, int b) {
    int e = local_edge(a, b);
    return t.edge_sign(tet, e) > 0 ? std::max(a, b) : std::min(a, b);
  };
  for (auto& a : arcs) {
    int h1 = head(a.tet, a.corner, a.from_local), h2 = head(a.tet, a.corner, a.to_local);
    if (h1 == h2) continue;
    int e = local_edge(h1, h2);
    steps.push_back({t.edge(a.tet, e), (h1 < h2 ? 1 : -1) * t.edge_sign(a.tet, e)});
  }
  return steps;
}

ReconstructedSurface reconstruct(const Triangulation& t, const NormalVector& x) {
  if (!is_admissible(t, x)) throw NormalError("reconstruct needs an admissible vector");
  const int nt = t.size();
  std::vector<std::array<long, 4>> tri(nt);
  std::vector<int> qt(nt, -1);
  std::vector<long> nq(nt, 0);
  for (int k = 0; k < nt; ++k) {
    for (int a = 0; a < 4; ++a) tri[k][a] = to_long(x.at(k, a));
    for (int q = 4; q < 7; ++q)
      if (x.at(k, q) != 0) {
        qt[k] = q;
        nq[k] = to_long(x.at(k, q));
      }
  }
  auto separates = [&](int k, int a, int b) { return qt[k] >= 0 && quad_side0(qt[k], a) != quad_side0(qt[k], b); };
  auto edge_points = [&](int k, int a, int b) { return tri[k][a] + tri[k][b] + (separates(k, a, b) ? nq[k] : 0); };

  // raw points: one per (tet, local edge, position from the lower vertex)
  std::vector<std::array<long, 6>> offset(nt);
  long total = 0;
  for (int k = 0; k < nt; ++k)
    for (int e = 0; e < 6; ++e) {
      offset[k][e] = total;
      total += edge_points(k, kEdgeVerts[e][0], kEdgeVerts[e][1]);
    }
  if (total > 50'000'000) throw NormalError("surface too large to reconstruct");
  auto point = [&](int k, int from, int to, long pos) {
    int e = local_edge(from, to);
    long n = edge_points(k, from, to);
    return static_cast<int>(offset[k][e] + (from < to ? pos : n - 1 - pos));
  };
  Dsu pts(static_cast<int>(total));
  for (int k = 0; k < nt; ++k)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = t.gluing(k, f);
      if (g.boundary()) continue;
      for (int e = 0; e < 6; ++e) {
        int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
        if (a == f || b == f) continue;
        long n = edge_points(k, a, b);
        if (n != edge_points(g.tet, g.perm[a], g.perm[b])) throw NormalError("internal: unmatched edge points");
        for (long i = 0; i < n; ++i) pts.unite(point(k, a, b, i), point(g.tet, g.perm[a], g.perm[b], i));
      }
    }

  ReconstructedSurface s;
  std::vector<Side> sides;
  std::map<std::array<long, 4>, int> side_at;  // (tet, face, corner, index)
  std::vector<std::vector<int>> corners;       // raw point per piece corner
  auto add_piece = [&](int k, int type, int copy, const std::vector<std::array<int, 2>>& edges_, const std::vector<long>& pos) {
    // edges_[i] = (shared vertex side, other) as a local edge; pos[i] from edges_[i][0]
    const int id = static_cast<int>(s.pieces.size());
    s.pieces.push_back({k, type, copy});
    std::vector<int> cs;
    const int m = static_cast<int>(edges_.size());
    for (int i = 0; i < m; ++i) cs.push_back(point(k, edges_[i][0], edges_[i][1], pos[i]));
    for (int i = 0; i < m; ++i) {
      const auto& e1 = edges_[i];
      const auto& e2 = edges_[(i + 1) % m];
      int xv = (e1[0] == e2[0] || e1[0] == e2[1]) ? e1[0] : e1[1];
      int u1 = e1[0] == xv ? e1[1] : e1[0];
      int u2 = e2[0] == xv ? e2[1] : e2[0];
      long idx = e1[0] == xv ? pos[i] : edge_points(k, e1[0], e1[1]) - 1 - pos[i];
      Side sd{id, k, 6 - xv - u1 - u2, xv, static_cast<int>(idx), u1, u2, cs[i], cs[(i + 1) % m]};
      side_at[{k, sd.face, xv, idx}] = static_cast<int>(sides.size());
      sides.push_back(sd);
    }
    corners.push_back(std::move(cs));
  };
  for (int k = 0; k < nt; ++k) {
    for (int a = 0; a < 4; ++a) {
      std::vector<std::array<int, 2>> es;
      for (int u = 0; u < 4; ++u)
        if (u != a) es.push_back({a, u});
      for (long j = 0; j < tri[k][a]; ++j) add_piece(k, a, static_cast<int>(j), es, {j, j, j});
    }
    if (qt[k] >= 0) {
      const int q = qt[k];
      int p0 = 0, p1 = q - 3, r[2], nr = 0;
      for (int v = 1; v < 4; ++v)
        if (v != p1) r[nr++] = v;
      std::vector<std::array<int, 2>> es{{p0, r[0]}, {p1, r[0]}, {p1, r[1]}, {p0, r[1]}};
      for (long j = 0; j < nq[k]; ++j) {
        std::vector<long> pos;
        for (auto& e : es) pos.push_back(tri[k][e[0]] + j);
        add_piece(k, q, static_cast<int>(j), es, pos);
      }
    }
  }

  // glue sides across interior faces
  const int np = static_cast<int>(s.pieces.size());
  Dsu comp(np);
  int interior_pairs = 0, boundary_sides = 0;
  for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
    Side& sd = sides[i];
    const Gluing& g = t.gluing(sd.tet, sd.face);
    if (g.boundary()) {
      ++boundary_sides;
      continue;
    }
    auto it = side_at.find({g.tet, g.face, g.perm[sd.corner], sd.index});
    if (it == side_at.end()) throw NormalError("internal: side without partner");
    sd.partner = it->second;
    if (i < it->second) {
      ++interior_pairs;
      s.adjacency.push_back({sd.piece, sides[it->second].piece});
    } else if (i == it->second) {
      throw NormalError("internal: side glued to itself");
    }
    comp.unite(sd.piece, sides[it->second].piece);
  }

  std::map<int, int> vid;
  for (auto& cs : corners)
    for (int p : cs) vid.emplace(pts.find(p), static_cast<int>(vid.size()));
  s.vertices = static_cast<int>(vid.size());
  s.edges = interior_pairs + boundary_sides;
  s.faces = np;
  s.euler_characteristic = s.vertices - s.edges + s.faces;

  std::map<int, int> cid;
  s.component_of.resize(np);
  for (int p = 0; p < np; ++p) s.component_of[p] = cid.emplace(comp.find(p), static_cast<int>(cid.size())).first->second;
  s.components = static_cast<int>(cid.size());

  // orientability: orient pieces so glued sides run opposite ways
  std::vector<int> orient(np, 0);
  std::vector<std::vector<int>> piece_sides(np);
  for (int i = 0; i < static_cast<int>(sides.size()); ++i) piece_sides[sides[i].piece].push_back(i);
  for (int start = 0; start < np; ++start) {
    if (orient[start]) continue;
    orient[start] = 1;
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int p = stack.back();
      stack.pop_back();
      for (int i : piece_sides[p]) {
        const Side& a = sides[i];
        if (a.partner < 0) continue;
        const Side& b = sides[a.partner];
        const Perm4& pm = t.gluing(a.tet, a.face).perm;
        int da = pm[a.u1] < pm[a.u2] ? 1 : -1;
        int db = b.u1 < b.u2 ? 1 : -1;
        int want = -orient[p] * da * db;
        if (!orient[b.piece]) {
          orient[b.piece] = want;
          stack.push_back(b.piece);
        } else if (orient[b.piece] != want) {
          s.orientable = false;
        }
      }
    }
  }

  // boundary curves
  std::map<int, std::vector<std::pair<int, int>>> at_point;  // point class -> (side, end)
  for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
    if (sides[i].partner >= 0) continue;
    at_point[pts.find(sides[i].p1)].push_back({i, 0});
    at_point[pts.find(sides[i].p2)].push_back({i, 1});
  }
  for (auto& [p, inc] : at_point)
    if (inc.size() != 2) throw NormalError("internal: boundary point of degree " + std::to_string(inc.size()));
  std::vector<char> used(sides.size(), 0);
  for (int i = 0; i < static_cast<int>(sides.size()); ++i) {
    if (sides[i].partner >= 0 || used[i]) continue;
    BoundaryCurve bc;
    bc.mark = t.gluing(sides[i].tet, sides[i].face).mark;
    int cur = i, enter = 0;  // traverse cur from end `enter` to the other end
    while (!used[cur]) {
      used[cur] = 1;
      const Side& sd = sides[cur];
      BoundaryArc a;
      a.piece = sd.piece;
      a.tet = sd.tet;
      a.face = sd.face;
      a.corner = sd.corner;
      a.index = sd.index;
      a.from_local = enter == 0 ? sd.u1 : sd.u2;
      a.to_local = enter == 0 ? sd.u2 : sd.u1;
      a.from_edge = t.edge(sd.tet, local_edge(sd.corner, a.from_local));
      a.to_edge = t.edge(sd.tet, local_edge(sd.corner, a.to_local));
      if (t.gluing(sd.tet, sd.face).mark != bc.mark) bc.mark.clear();
      bc.arcs.push_back(a);
      const int exit_end = 1 - enter;
      const int q = pts.find(exit_end == 0 ? sd.p1 : sd.p2);
      const auto& inc = at_point.at(q);
      auto nxt = inc[0].first == cur && inc[0].second == exit_end ? inc[1] : inc[0];
      cur = nxt.first;
      enter = nxt.second;
    }
    s.boundary_curves.push_back(std::move(bc));
  }

  // triangulated copy
  for (int p = 0; p < np; ++p) {
    std::vector<int> c;
    for (int r : corners[p]) c.push_back(vid.at(pts.find(r)));
    s.triangles.push_back({c[0], c[1], c[2]});
    s.triangle_piece.push_back(p);
    if (c.size() == 4) {
      s.triangles.push_back({c[0], c[2], c[3]});
      s.triangle_piece.push_back(p);
    }
  }
  s.vertex_edge.assign(s.vertices, {-1, -1});
  for (int k = 0; k < nt; ++k)
    for (int e = 0; e < 6; ++e) {
      int a = kEdgeVerts[e][0], b = kEdgeVerts[e][1];
      long n = edge_points(k, a, b);
      for (long i = 0; i < n; ++i) {
        auto it = vid.find(pts.find(static_cast<int>(offset[k][e] + i)));
        if (it == vid.end()) continue;
        long from_tail = t.edge_sign(k, e) > 0 ? i : n - 1 - i;
        s.vertex_edge[it->second] = {t.edge(k, e), static_cast<int>(from_tail)};
      }
    }
  return s;
}

}  // namespace km
