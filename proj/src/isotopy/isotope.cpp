#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "surface_internal.hpp"

namespace km::iso {

namespace {

using detail::boundary_coord;
using detail::links;

// ---------------------------------------------------------------------------
// Arrangement of alpha, beta and the 1-skeleton: cells are the pieces of
// triangles cut by the two curves; regions are cells merged across edges.

constexpr int kVirtual = -1;

struct Node {
  int tri = 0;
  int curve = -1, point = -1;  // crossing occurrence
  int corner = -1;             // triangle corner
  int xa = -1, xb = -1;        // intersection of alpha arc xa and beta arc xb
  mpq_class coord;             // boundary occurrences
};

struct Dart {
  int from = 0, to = 0;
  bool chord = false;
  int curve = -1, arc = -1;  // chord darts
  int twin = -1;
  int cell = -1;
  int edge = -1;             // interval darts
  mpq_class key;             // lower canonical end of the interval
  mpq_class far;             // chord darts: boundary coordinate of the chord end ahead
};

struct Cell {
  int tri = 0;
  std::vector<int> darts;
};

struct Region {
  std::vector<int> cells;
  int intervals = 0;
  std::vector<int> vertices;
  std::set<std::pair<int, int>> corners;
  int corner_count = 0;
  unsigned curves = 0;
  int euler() const { return static_cast<int>(cells.size()) - intervals + static_cast<int>(vertices.size()); }
};

struct Arrangement {
  std::vector<Node> nodes;
  std::vector<Dart> darts;
  std::vector<std::vector<int>> rot;  // outgoing darts counterclockwise; kVirtual marks the clockwise boundary
  std::vector<Cell> cells;
  std::vector<int> region_of;         // per cell
  std::vector<Region> regions;
  std::map<std::pair<int, int>, int> x_node;
  std::map<std::pair<int, int>, int> first_segment;  // (curve, arc) -> dart leaving the arc's start
};

mpq_class mod3(const mpq_class& x) {
  mpq_class y = x;
  while (y < 0) y += 3;
  while (y >= 3) y -= 3;
  return y;
}

Arrangement arrange(const TriSurface& f, const std::array<SurfaceCurve, 2>& cv) {
  Arrangement g;
  struct ChordRec {
    int curve, arc, n0, n1;
    mpq_class x, y;
  };
  std::vector<std::vector<ChordRec>> by_tri(f.triangles());
  std::vector<std::vector<int>> occ(f.triangles());
  for (int t = 0; t < f.triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      Node nd;
      nd.tri = t;
      nd.corner = k;
      nd.coord = k;
      occ[t].push_back(static_cast<int>(g.nodes.size()));
      g.nodes.push_back(nd);
    }
  for (int c = 0; c < 2; ++c) {
    const int n = cv[c].length();
    for (int j = 0; j < n; ++j) {
      auto& a = cv[c].arcs[j];
      ChordRec r{c, j, 0, 0, boundary_coord(f, a.tri, a.in, cv[c].points[j].pos),
                 boundary_coord(f, a.tri, a.out, cv[c].points[(j + 1) % n].pos)};
      Node p;
      p.tri = a.tri;
      p.curve = c;
      p.point = j;
      p.coord = r.x;
      r.n0 = static_cast<int>(g.nodes.size());
      g.nodes.push_back(p);
      p.point = (j + 1) % n;
      p.coord = r.y;
      r.n1 = static_cast<int>(g.nodes.size());
      g.nodes.push_back(p);
      occ[a.tri].push_back(r.n0);
      occ[a.tri].push_back(r.n1);
      by_tri[a.tri].push_back(r);
    }
  }
  auto add_dart = [&](Dart d) {
    g.darts.push_back(std::move(d));
    return static_cast<int>(g.darts.size()) - 1;
  };
  g.rot.resize(g.nodes.size());
  std::vector<int> bnext(g.nodes.size(), -1), chord_out(g.nodes.size(), -1);

  for (int t = 0; t < f.triangles(); ++t) {
    auto& o = occ[t];
    std::sort(o.begin(), o.end(), [&](int a, int b) { return g.nodes[a].coord < g.nodes[b].coord; });
    for (std::size_t i = 1; i < o.size(); ++i)
      if (g.nodes[o[i]].coord == g.nodes[o[i - 1]].coord) throw IsotopyError("curves share a crossing point");
    const int nb = static_cast<int>(o.size());
    for (int i = 0; i < nb; ++i) {
      int u = o[i], w = o[(i + 1) % nb];
      Dart d;
      d.from = u;
      d.to = w;
      mpq_class cu = g.nodes[u].coord, cw = g.nodes[w].coord;
      if (cw == 0) cw = 3;
      int side = static_cast<int>(cu.get_d());
      if (side > 2) side = 2;
      d.edge = f.edge(t, side);
      auto canon = [&](const mpq_class& c) { return detail::side_param(f, t, side, c - side); };
      // side_param maps a canonical position to a side parameter and back
      mpq_class pu = canon(cu), pw = canon(cw);
      d.key = std::min(pu, pw);
      bnext[u] = add_dart(d);
    }
    // chords and their intersections
    auto& ch = by_tri[t];
    std::vector<std::vector<std::pair<mpq_class, int>>> on(ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i)
      for (std::size_t j = i + 1; j < ch.size(); ++j) {
        if (ch[i].curve == ch[j].curve) continue;
        if (!links(ch[i].x, ch[i].y, ch[j].x, ch[j].y)) continue;
        auto& A = ch[i].curve == 0 ? ch[i] : ch[j];
        auto& B = ch[i].curve == 0 ? ch[j] : ch[i];
        Node x;
        x.tri = t;
        x.xa = A.arc;
        x.xb = B.arc;
        int id = static_cast<int>(g.nodes.size());
        g.nodes.push_back(x);
        g.rot.emplace_back();
        bnext.push_back(-1);
        chord_out.push_back(-1);
        g.x_node[{A.arc, B.arc}] = id;
        for (auto [self, other] : {std::pair{i, j}, std::pair{j, i}}) {
          auto& c = ch[self];
          auto& d = ch[other];
          mpq_class len = mod3(c.y - c.x);
          mpq_class d0 = mod3(d.x - c.x), d1 = mod3(d.y - c.x);
          on[self].push_back({d0 < len ? d0 : d1, id});
        }
      }
    for (std::size_t i = 0; i < ch.size(); ++i) {
      auto& c = ch[i];
      std::sort(on[i].begin(), on[i].end());
      std::vector<int> seq{c.n0};
      for (auto& [dist, id] : on[i]) seq.push_back(id);
      seq.push_back(c.n1);
      for (std::size_t q = 0; q + 1 < seq.size(); ++q) {
        Dart fw, bw;
        fw.chord = bw.chord = true;
        fw.curve = bw.curve = c.curve;
        fw.arc = bw.arc = c.arc;
        fw.from = seq[q];
        fw.to = seq[q + 1];
        fw.far = c.y;
        bw.from = seq[q + 1];
        bw.to = seq[q];
        bw.far = c.x;
        int a = add_dart(fw), b = add_dart(bw);
        g.darts[a].twin = b;
        g.darts[b].twin = a;
        if (q == 0) {
          chord_out[c.n0] = a;
          g.first_segment[{c.curve, c.arc}] = a;
        }
        if (q + 2 == seq.size()) chord_out[c.n1] = b;
        if (g.nodes[seq[q]].xa >= 0) g.rot[seq[q]].push_back(a);
        if (g.nodes[seq[q + 1]].xa >= 0) g.rot[seq[q + 1]].push_back(b);
      }
    }
  }
  for (std::size_t v = 0; v < g.nodes.size(); ++v) {
    auto& r = g.rot[v];
    if (g.nodes[v].xa >= 0) {
      if (r.size() != 4) throw IsotopyError("internal: intersection of wrong degree");
      std::sort(r.begin(), r.end(), [&](int a, int b) { return g.darts[a].far < g.darts[b].far; });
    } else {
      r.push_back(bnext[v]);
      if (chord_out[v] >= 0) r.push_back(chord_out[v]);
      r.push_back(kVirtual);
    }
  }
  // faces on the left of each dart
  auto next = [&](int d) {
    const Dart& x = g.darts[d];
    auto& r = g.rot[x.to];
    int idx;
    if (!x.chord) {
      idx = static_cast<int>(r.size()) - 1;
    } else {
      idx = static_cast<int>(std::find(r.begin(), r.end(), x.twin) - r.begin());
    }
    int p = r[(idx + static_cast<int>(r.size()) - 1) % r.size()];
    if (p == kVirtual) throw IsotopyError("internal: face walk left the triangle");
    return p;
  };
  for (int d = 0; d < static_cast<int>(g.darts.size()); ++d) {
    if (g.darts[d].cell >= 0) continue;
    Cell c;
    c.tri = g.nodes[g.darts[d].from].tri;
    int id = static_cast<int>(g.cells.size());
    for (int x = d; g.darts[x].cell < 0; x = next(x)) {
      g.darts[x].cell = id;
      c.darts.push_back(x);
    }
    g.cells.push_back(c);
  }

  // regions
  std::vector<int> parent(g.cells.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::pair<int, mpq_class>, std::vector<int>> intervals;
  for (int d = 0; d < static_cast<int>(g.darts.size()); ++d)
    if (!g.darts[d].chord) intervals[{g.darts[d].edge, g.darts[d].key}].push_back(d);
  for (auto& [k, l] : intervals) {
    if (l.size() != 2) throw IsotopyError("internal: interval not seen from two sides");
    parent[find(g.darts[l[0]].cell)] = find(g.darts[l[1]].cell);
  }
  std::map<int, int> rid;
  g.region_of.resize(g.cells.size());
  for (std::size_t c = 0; c < g.cells.size(); ++c) {
    int r = find(static_cast<int>(c));
    auto it = rid.emplace(r, static_cast<int>(rid.size())).first;
    g.region_of[c] = it->second;
  }
  g.regions.resize(rid.size());
  for (std::size_t c = 0; c < g.cells.size(); ++c) g.regions[g.region_of[c]].cells.push_back(static_cast<int>(c));
  for (auto& [k, l] : intervals) ++g.regions[g.region_of[g.darts[l[0]].cell]].intervals;
  std::set<int> seen_vertex;
  for (int d = 0; d < static_cast<int>(g.darts.size()); ++d) {
    auto& x = g.darts[d];
    if (x.chord || g.nodes[x.from].corner < 0) continue;
    int v = f.corner(g.nodes[x.from].tri, g.nodes[x.from].corner);
    if (seen_vertex.insert(v).second) g.regions[g.region_of[x.cell]].vertices.push_back(v);
  }
  for (auto& c : g.cells) {
    const int n = static_cast<int>(c.darts.size());
    auto& reg = g.regions[g.region_of[&c - g.cells.data()]];
    for (int i = 0; i < n; ++i) {
      auto& d1 = g.darts[c.darts[i]];
      auto& d2 = g.darts[c.darts[(i + 1) % n]];
      if (d1.chord) reg.curves |= 1u << d1.curve;
      if (d1.chord && d2.chord && d1.curve != d2.curve) {
        auto& x = g.nodes[d1.to];
        reg.corners.insert({x.xa, x.xb});
        ++reg.corner_count;
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------

SurfaceCurve reversed(const SurfaceCurve& c) {
  SurfaceCurve r;
  const int n = c.length();
  for (int i = 0; i < n; ++i) {
    int j = (n - i) % n;  // point order 0, n-1, n-2, ...
    r.points.push_back(c.points[j]);
    auto& a = c.arcs[(j + n - 1) % n];
    r.arcs.push_back({a.tri, a.out, a.in});
  }
  return r;
}

bool same_curve(const SurfaceCurve& a, const SurfaceCurve& b) {
  if (a.length() != b.length()) return false;
  const int n = a.length();
  for (const SurfaceCurve& c : {b, reversed(b)})
    for (int s = 0; s < n; ++s) {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = a.points[i] == c.points[(i + s) % n] && a.arcs[i] == c.arcs[(i + s) % n];
      if (ok) return true;
    }
  return false;
}

// Applies one recorded move to the pair; returns the arc map of the moved curve.
std::vector<int> apply_pair(const TriSurface& f, std::array<SurfaceCurve, 2>& cv, const BasicMove& m) {
  if (m.curve != 0 && m.curve != 1) throw MoveError("move names no curve");
  SurfaceCurve& c = cv[m.curve];
  const SurfaceCurve& other = cv[1 - m.curve];
  auto adjacent = [&](int i, int dir) {
    // nearest crossing of either curve beyond point i in direction dir (+1 / -1)
    const auto& p = c.points.at(i);
    int owner = -1;
    mpq_class best = dir > 0 ? 1 : 0;
    for (int k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < cv[k].points.size(); ++j) {
        auto& q = cv[k].points[j];
        if (q.edge != p.edge || (k == m.curve && static_cast<int>(j) == i)) continue;
        if ((dir > 0 && q.pos > p.pos && q.pos < best) || (dir < 0 && q.pos < p.pos && q.pos > best)) {
          best = q.pos;
          owner = k;
        }
      }
    return std::pair{owner, best};
  };
  switch (m.kind) {
    case 1: {
      if (m.index < 0 || m.index >= c.length()) throw MoveError("no crossing to slide");
      int dir = m.end ? 1 : -1;
      auto [owner, q] = adjacent(m.index, dir);
      if (owner != 1 - m.curve) throw MoveError("type 1 move does not pass the other curve");
      // land between the passed crossing and the next one beyond it
      CurvePoint probe{c.points[m.index].edge, q};
      mpq_class beyond = dir > 0 ? 1 : 0;
      for (int k = 0; k < 2; ++k)
        for (auto& x : cv[k].points)
          if (x.edge == probe.edge && ((dir > 0 && x.pos > q && x.pos < beyond) || (dir < 0 && x.pos < q && x.pos > beyond)))
            beyond = x.pos;
      auto r = detail::slide_point(f, c, m.index, (q + beyond) / 2);
      c = std::move(r.curve);
      return r.arc_map;
    }
    case 2: {
      auto r = detail::over_vertex(f, c, m.index, m.end, {&other});
      c = std::move(r.curve);
      return r.arc_map;
    }
    case 3: {
      auto r = detail::across_bigon(f, c, m.index, {&other});
      c = std::move(r.curve);
      return r.arc_map;
    }
    case 4: {
      if (m.index < 0 || m.index >= c.length()) throw MoveError("no crossing to merge");
      auto [owner, q] = adjacent(m.index, m.end ? 1 : -1);
      if (owner != 1 - m.curve) throw MoveError("merge target is not on the other curve");
      c.points[m.index].pos = q;
      std::vector<int> id(c.length());
      std::iota(id.begin(), id.end(), 0);
      return id;
    }
    default: throw MoveError("unknown basic move kind " + std::to_string(m.kind));
  }
}

long move_cost(const TriSurface& f, const std::array<SurfaceCurve, 2>& cv, const BasicMove& m) {
  switch (m.kind) {
    case 2: {
      auto& p = cv[m.curve].points.at(m.index);
      return detail::type2_cost(f.valence(f.edge_end(p.edge, m.end)));
    }
    case 3: return detail::kType3Cost;
    default: return detail::kType1Cost;
  }
}

struct Engine {
  const TriSurface& f;
  std::array<SurfaceCurve, 2> cv;
  SurfaceIsotopy& out;
  mpz_class cap;

  // Returns the change in the intersection count: 0, or -2 when a type 3 move
  // pushes the return arc across the whole 2-gon.
  int run(BasicMove m, std::vector<std::pair<int, int>*> track = {}) {
    m.cost = move_cost(f, cv, m);
    int before = m.kind == 4 ? 0 : intersections(f, cv[0], cv[1]);
    auto map = apply_pair(f, cv, m);
    int delta = 0;
    if (m.kind == 2 || m.kind == 3) {
      delta = intersections(f, cv[0], cv[1]) - before;
      if (delta != 0 && !(m.kind == 3 && delta == -2))
        throw IsotopyError("internal: type " + std::to_string(m.kind) + " move changed the intersection count");
    }
    if (delta == 0)
      for (auto* t : track) {
        int& x = m.curve == 0 ? t->first : t->second;
        x = map.at(x);
        if (x < 0) throw IsotopyError("internal: 2-gon corner arc removed");
      }
    out.script.basic.push_back(m);
    ++out.basic_moves;
    out.elementary_moves += m.cost;
    if (out.basic_moves > cap) throw BudgetExceeded("basic move budget exhausted");
    return delta;
  }

  // Type 2 over a vertex of the region, preferring beta.
  bool clear_vertex(const Arrangement& g, int region) {
    std::optional<BasicMove> best;
    for (int c : g.regions[region].cells)
      for (int d : g.cells[c].darts) {
        auto& x = g.darts[d];
        if (x.chord) continue;
        const Node& u = g.nodes[x.from];
        const Node& w = g.nodes[x.to];
        const Node* corner = u.corner >= 0 ? &u : w.corner >= 0 ? &w : nullptr;
        const Node* pt = u.curve >= 0 ? &u : w.curve >= 0 ? &w : nullptr;
        if (!corner || !pt) continue;
        int side = static_cast<int>(mpq_class(std::min(u.coord, w.coord == 0 ? mpq_class(3) : w.coord)).get_d());
        if (side > 2) side = 2;
        int par = corner->corner == side ? 0 : 1;
        int end = f.is_canonical(corner->tri, side) ? par : 1 - par;
        BasicMove m{2, pt->curve, pt->point, end, 0};
        if (!best || m.curve > best->curve) best = m;
        if (best->curve == 1) break;
      }
    if (!best) return false;
    pending = *best;
    return true;
  }

  bool clear_bigon_cell(const Arrangement& g, int region) {
    for (int c : g.regions[region].cells) {
      auto& ds = g.cells[c].darts;
      if (ds.size() != 2) continue;
      int chord = g.darts[ds[0]].chord ? ds[0] : g.darts[ds[1]].chord ? ds[1] : -1;
      if (chord < 0 || g.darts[ds[0]].chord == g.darts[ds[1]].chord) continue;
      pending = BasicMove{3, g.darts[chord].curve, g.darts[chord].arc, 0, 0};
      return true;
    }
    return false;
  }

  // Intervals of the region as (alpha point, beta point) pairs.
  std::vector<std::pair<int, int>> strip_intervals(const Arrangement& g, int region) {
    std::set<std::pair<int, mpq_class>> seen;
    std::vector<std::pair<int, int>> out;
    for (int c : g.regions[region].cells)
      for (int d : g.cells[c].darts) {
        auto& x = g.darts[d];
        if (x.chord || !seen.insert({x.edge, x.key}).second) continue;
        const Node& u = g.nodes[x.from];
        const Node& w = g.nodes[x.to];
        if (u.curve < 0 || w.curve < 0 || u.curve == w.curve)
          throw ExhaustionError("region has a cell that is not a 3-gon or 4-gon");
        out.push_back(u.curve == 0 ? std::pair{u.point, w.point} : std::pair{w.point, u.point});
      }
    return out;
  }

  BasicMove pending;
};

int find_bigon(const Arrangement& g, std::pair<int, int> x, std::pair<int, int> y) {
  for (std::size_t r = 0; r < g.regions.size(); ++r) {
    auto& reg = g.regions[r];
    if (reg.euler() == 1 && reg.corner_count == 2 && reg.corners.count(x) && reg.corners.count(y))
      return static_cast<int>(r);
  }
  return -1;
}

int left_of_alpha(const Arrangement& g, bool left) {
  int d = g.first_segment.at({0, 0});
  if (!left) d = g.darts[d].twin;
  return g.region_of[g.darts[d].cell];
}

}  // namespace

SurfaceIsotopy isotope_on_surface(const TriSurface& f, const SurfaceCurve& alpha, const SurfaceCurve& beta,
                                  const IsotopyLimits& lim) {
  check_curve(f, alpha);
  check_curve(f, beta);
  SurfaceIsotopy out;
  out.alpha = alpha;
  out.beta = beta;
  out.length = alpha.length() + beta.length();
  out.triangles = f.triangles();
  out.valence = f.max_valence();
  mpz_class l = out.length;
  out.basic_budget = l * l * l * l * out.triangles * out.valence;
  out.elementary_budget = 17 * l * l * l * l * out.triangles * out.triangles * out.triangles;
  if (same_curve(alpha, beta)) {
    out.result = alpha;
    out.round_intersections.push_back(0);
    return out;
  }
  Engine eng{f, {alpha, beta}, out, lim.max_basic_moves > 0 ? mpz_class(lim.max_basic_moves) : out.basic_budget, {}};
  int inter = intersections(f, alpha, beta);
  if (inter % 2) throw ExhaustionError("odd intersection count: curves are not isotopic");

  while (inter > 0) {
    out.round_intersections.push_back(inter);
    Arrangement g = arrange(f, eng.cv);
    // innermost 2-gon with the fewest vertices, then cells
    int pick = -1;
    for (std::size_t r = 0; r < g.regions.size(); ++r) {
      auto& reg = g.regions[r];
      if (reg.euler() != 1 || reg.corner_count != 2 || reg.corners.size() != 2) continue;
      if (pick < 0 || std::pair(reg.vertices.size(), reg.cells.size()) <
                          std::pair(g.regions[pick].vertices.size(), g.regions[pick].cells.size()))
        pick = static_cast<int>(r);
    }
    if (pick < 0) throw ExhaustionError("no innermost 2-gon while the curves still meet");
    auto x = *g.regions[pick].corners.begin(), y = *g.regions[pick].corners.rbegin();
    while (true) {
      int region = find_bigon(g, x, y);
      if (region < 0) throw ExhaustionError("innermost 2-gon lost track of its corners");
      if (eng.clear_vertex(g, region) || eng.clear_bigon_cell(g, region)) {
        if (eng.run(eng.pending, {&x, &y}) < 0) break;
        g = arrange(f, eng.cv);
        continue;
      }
      auto pairs = eng.strip_intervals(g, region);
      for (auto [a, b] : pairs) {
        const auto& pa = eng.cv[0].points.at(a);
        const auto& pb = eng.cv[1].points.at(b);
        eng.run(BasicMove{1, 1, b, pa.pos > pb.pos ? 1 : 0, 0});
      }
      break;
    }
    int now = intersections(f, eng.cv[0], eng.cv[1]);
    if (now != inter - 2) throw IsotopyError("2-gon round changed the intersection count by " + std::to_string(now - inter));
    inter = now;
    ++out.rounds;
  }
  out.round_intersections.push_back(0);

  // disjoint: clear one complementary annulus and merge across it
  if (!same_curve(eng.cv[0], eng.cv[1])) {
    Arrangement g = arrange(f, eng.cv);
    int best = -1;
    bool left = true;
    for (bool side : {true, false}) {
      int r = left_of_alpha(g, side);
      auto& reg = g.regions[r];
      if (reg.euler() != 0 || reg.curves != 3u) continue;
      if (best < 0 || std::pair(reg.vertices.size(), reg.cells.size()) <
                          std::pair(g.regions[best].vertices.size(), g.regions[best].cells.size())) {
        best = r;
        left = side;
      }
    }
    if (best < 0) throw ExhaustionError("disjoint curves do not cobound an annulus");
    while (true) {
      int region = left_of_alpha(g, left);
      auto& reg = g.regions[region];
      if (reg.euler() != 0 || reg.curves != 3u) throw ExhaustionError("annulus between the curves was lost");
      if (eng.clear_vertex(g, region) || eng.clear_bigon_cell(g, region)) {
        eng.run(eng.pending);
        g = arrange(f, eng.cv);
        continue;
      }
      auto pairs = eng.strip_intervals(g, region);
      if (static_cast<int>(pairs.size()) != eng.cv[1].length() || eng.cv[0].length() != eng.cv[1].length())
        throw ExhaustionError("annulus cells are not all 4-gons");
      for (auto [a, b] : pairs) {
        const auto& pa = eng.cv[0].points.at(a);
        const auto& pb = eng.cv[1].points.at(b);
        eng.run(BasicMove{4, 1, b, pa.pos > pb.pos ? 1 : 0, 0});
      }
      break;
    }
    if (!same_curve(eng.cv[0], eng.cv[1])) throw IsotopyError("merged curves differ");
  }
  out.result = eng.cv[0];
  return out;
}

std::array<SurfaceCurve, 2> replay_surface(const TriSurface& f, const SurfaceCurve& alpha, const SurfaceCurve& beta,
                                           const MoveScript& m) {
  check_curve(f, alpha);
  check_curve(f, beta);
  std::array<SurfaceCurve, 2> cv{alpha, beta};
  for (auto& mv : m.basic) {
    if (move_cost(f, cv, mv) != mv.cost) throw MoveError("recorded cost differs on replay");
    int before = mv.kind == 4 ? 0 : intersections(f, cv[0], cv[1]);
    apply_pair(f, cv, mv);
    if (mv.kind == 2 || mv.kind == 3) {
      int delta = intersections(f, cv[0], cv[1]) - before;
      if (delta != 0 && !(mv.kind == 3 && delta == -2)) throw MoveError("move changed the intersection count");
    }
    if (mv.kind != 4) check_curve(f, cv[mv.curve]);
  }
  if (!m.basic.empty() && m.basic.back().kind == 4) {
    if (!same_curve(cv[0], cv[1])) throw MoveError("merged curves differ on replay");
  }
  return cv;
}

}  // namespace km::iso
