#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include "surface_internal.hpp"

namespace km::iso {

TriSurface::TriSurface(std::vector<std::array<int, 3>> corner, std::vector<std::array<int, 3>> edge,
                       std::vector<std::array<int, 3>> sign) {
  const int n = static_cast<int>(corner.size());
  if (n == 0 || edge.size() != corner.size() || sign.size() != corner.size())
    throw IsotopyError("surface tables have inconsistent sizes");
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 3; ++s) {
      if (corner[i][s] < 0 || edge[i][s] < 0) throw IsotopyError("negative surface label");
      nv_ = std::max(nv_, corner[i][s] + 1);
      ne_ = std::max(ne_, edge[i][s] + 1);
    }
  std::vector<std::vector<std::pair<int, int>>> occ(ne_);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 3; ++s) occ[edge[i][s]].push_back({i, s});
  for (int e = 0; e < ne_; ++e)
    if (occ[e].size() != 2) throw IsotopyError("edge " + std::to_string(e) + " is not on exactly two sides");

  // orient by breadth-first search: glued sides must run in opposite directions
  std::vector<int> flip(n, -1);
  for (int root = 0; root < n; ++root) {
    if (flip[root] >= 0) continue;
    flip[root] = 0;
    std::deque<int> q{root};
    while (!q.empty()) {
      int i = q.front();
      q.pop_front();
      for (int s = 0; s < 3; ++s) {
        auto& o = occ[edge[i][s]];
        auto [j, s2] = o[0] == std::make_pair(i, s) ? o[1] : o[0];
        int eff = flip[i] ? -sign[i][s] : sign[i][s];
        int req = sign[j][s2] == -eff ? 0 : 1;
        if (flip[j] < 0) {
          flip[j] = req;
          q.push_back(j);
        } else if (flip[j] != req) {
          throw IsotopyError("surface is not orientable");
        }
      }
    }
  }
  corner_ = corner;
  edge_ = edge;
  for (int i = 0; i < n; ++i)
    if (flip[i]) {
      corner_[i] = {corner[i][0], corner[i][2], corner[i][1]};
      edge_[i] = {edge[i][2], edge[i][1], edge[i][0]};
    }
  across_.resize(n);
  canon_.assign(ne_, {-1, -1});
  std::vector<std::vector<std::pair<int, int>>> occ2(ne_);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 3; ++s) occ2[edge_[i][s]].push_back({i, s});
  for (int e = 0; e < ne_; ++e) {
    auto a = occ2[e][0], b = occ2[e][1];
    across_[a.first][a.second] = b;
    across_[b.first][b.second] = a;
    canon_[e] = std::min(a, b);
  }
  valence_.assign(nv_, 0);
  for (auto& c : corner_)
    for (int v : c) ++valence_[v];
}

TriSurface TriSurface::from_triples(const std::vector<std::array<int, 3>>& tris) {
  std::map<std::pair<int, int>, int> ids;
  std::vector<std::array<int, 3>> edge(tris.size()), sign(tris.size());
  for (std::size_t i = 0; i < tris.size(); ++i)
    for (int s = 0; s < 3; ++s) {
      int a = tris[i][s], b = tris[i][(s + 1) % 3];
      if (a == b) throw IsotopyError("degenerate triangle");
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto it = ids.emplace(key, static_cast<int>(ids.size())).first;
      edge[i][s] = it->second;
      sign[i][s] = a < b ? 1 : -1;
    }
  return TriSurface(tris, edge, sign);
}

TriSurface TriSurface::boundary_of(const Triangulation& t, const std::string& mark, std::vector<int>* face_of,
                                   std::vector<int>* vertex_of) {
  std::vector<std::array<int, 3>> corner, edge, sign;
  std::map<int, int> vid, eid;
  std::vector<int> faces, verts;
  auto v_id = [&](int v) {
    auto [it, fresh] = vid.emplace(v, static_cast<int>(vid.size()));
    if (fresh) verts.push_back(v);
    return it->second;
  };
  auto e_id = [&](int e) { return eid.emplace(e, static_cast<int>(eid.size())).first->second; };
  for (auto& bc : t.boundary_components()) {
    if (bc.mark != mark) continue;
    for (int f : bc.faces) {
      auto [tet, fa] = t.face_rep(f);
      int l[3], j = 0;
      for (int a = 0; a < 4; ++a)
        if (a != fa) l[j++] = a;
      std::array<int, 3> c, e, sg;
      for (int s = 0; s < 3; ++s) {
        int x = l[s], y = l[(s + 1) % 3];
        int le = local_edge(std::min(x, y), std::max(x, y));
        c[s] = v_id(t.vertex(tet, x));
        e[s] = e_id(t.edge(tet, le));
        sg[s] = x < y ? t.edge_sign(tet, le) : -t.edge_sign(tet, le);
      }
      corner.push_back(c);
      edge.push_back(e);
      sign.push_back(sg);
      faces.push_back(f);
    }
  }
  if (corner.empty()) throw IsotopyError("no boundary component marked " + mark);
  if (face_of) *face_of = faces;
  if (vertex_of) *vertex_of = verts;
  return TriSurface(corner, edge, sign);
}

int TriSurface::max_valence() const { return valence_.empty() ? 0 : *std::max_element(valence_.begin(), valence_.end()); }

std::pair<int, int> TriSurface::next_around(int i, int k) const { return across_[i][(k + 2) % 3]; }

std::pair<int, int> TriSurface::prev_around(int i, int k) const {
  auto [j, s] = across_[i][k];
  return {j, (s + 1) % 3};
}

int TriSurface::edge_end(int e, int end) const {
  auto [i, s] = canon_[e];
  return corner_[i][(s + end) % 3];
}

std::vector<int> SurfaceCurve::word() const {
  std::vector<int> w;
  for (auto& p : points) w.push_back(p.edge);
  return w;
}

std::vector<int> SurfaceCurve::returns() const {
  std::vector<int> r;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    if (arcs[i].in == arcs[i].out) r.push_back(static_cast<int>(i));
  return r;
}

std::string SurfaceCurve::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) out << ' ';
    out << points[i].edge << '@' << points[i].pos.get_str() << '[' << arcs[i].tri << ':' << arcs[i].in << arcs[i].out
        << ']';
  }
  return out.str();
}

namespace detail {

mpq_class side_param(const TriSurface& f, int tri, int side, const mpq_class& pos) {
  return f.is_canonical(tri, side) ? pos : mpq_class(1 - pos);
}

mpq_class boundary_coord(const TriSurface& f, int tri, int side, const mpq_class& pos) {
  return side + side_param(f, tri, side, pos);
}

bool links(const mpq_class& a0, const mpq_class& a1, const mpq_class& b0, const mpq_class& b1) {
  const mpq_class& lo = a0 < a1 ? a0 : a1;
  const mpq_class& hi = a0 < a1 ? a1 : a0;
  bool x = lo < b0 && b0 < hi, y = lo < b1 && b1 < hi;
  return x != y;
}

}  // namespace detail

namespace {

using detail::boundary_coord;
using detail::links;

struct Chord {
  mpq_class x, y;
  int arc;
};

std::vector<std::vector<Chord>> chords(const TriSurface& f, const SurfaceCurve& c) {
  std::vector<std::vector<Chord>> out(f.triangles());
  const int n = c.length();
  for (int i = 0; i < n; ++i) {
    auto& a = c.arcs[i];
    out[a.tri].push_back({boundary_coord(f, a.tri, a.in, c.points[i].pos),
                          boundary_coord(f, a.tri, a.out, c.points[(i + 1) % n].pos), i});
  }
  return out;
}

std::vector<mpq_class> positions_on(int e, const std::vector<const SurfaceCurve*>& curves) {
  std::vector<mpq_class> out;
  for (auto* c : curves)
    for (auto& p : c->points)
      if (p.edge == e) out.push_back(p.pos);
  return out;
}

}  // namespace

void check_curve(const TriSurface& f, const SurfaceCurve& c) {
  const int n = c.length();
  if (n == 0) throw IsotopyError("curve crosses no edge");
  if (static_cast<int>(c.arcs.size()) != n) throw IsotopyError("curve needs one arc per crossing");
  std::map<int, std::vector<mpq_class>> seen;
  for (int i = 0; i < n; ++i) {
    auto& a = c.arcs[i];
    auto& p = c.points[i];
    if (a.tri < 0 || a.tri >= f.triangles() || a.in < 0 || a.in > 2 || a.out < 0 || a.out > 2)
      throw IsotopyError("arc " + std::to_string(i) + " is out of range");
    if (p.pos <= 0 || p.pos >= 1) throw IsotopyError("crossing " + std::to_string(i) + " is not inside its edge");
    if (f.edge(a.tri, a.in) != p.edge || f.edge(a.tri, a.out) != c.points[(i + 1) % n].edge)
      throw IsotopyError("arc " + std::to_string(i) + " does not join its crossings");
    auto& nx = c.arcs[(i + 1) % n];
    if (f.across(a.tri, a.out) != std::make_pair(nx.tri, nx.in))
      throw IsotopyError("arcs " + std::to_string(i) + " and " + std::to_string((i + 1) % n) + " are not adjacent");
    auto& l = seen[p.edge];
    if (std::find(l.begin(), l.end(), p.pos) != l.end()) throw IsotopyError("curve crosses an edge twice at one point");
    l.push_back(p.pos);
  }
  for (auto& in_tri : chords(f, c))
    for (std::size_t i = 0; i < in_tri.size(); ++i)
      for (std::size_t j = i + 1; j < in_tri.size(); ++j)
        if (links(in_tri[i].x, in_tri[i].y, in_tri[j].x, in_tri[j].y))
          throw IsotopyError("arcs " + std::to_string(in_tri[i].arc) + " and " + std::to_string(in_tri[j].arc) +
                             " cross");
}

bool is_embedded(const TriSurface& f, const SurfaceCurve& c) {
  try {
    check_curve(f, c);
    return true;
  } catch (const IsotopyError&) {
    return false;
  }
}

int intersections(const TriSurface& f, const SurfaceCurve& a, const SurfaceCurve& b) {
  auto ca = chords(f, a), cb = chords(f, b);
  int n = 0;
  for (int t = 0; t < f.triangles(); ++t)
    for (auto& x : ca[t])
      for (auto& y : cb[t]) {
        if (x.x == y.x || x.x == y.y || x.y == y.x || x.y == y.y)
          throw IsotopyError("curves share a crossing point");
        n += links(x.x, x.y, y.x, y.y) ? 1 : 0;
      }
  return n;
}

SurfaceCurve push_off(const TriSurface& f, const SurfaceCurve& c, const std::vector<const SurfaceCurve*>& avoid) {
  check_curve(f, c);
  std::vector<const SurfaceCurve*> all{&c};
  all.insert(all.end(), avoid.begin(), avoid.end());
  SurfaceCurve out = c;
  const int n = c.length();
  for (int i = 0; i < n; ++i) {
    // left of the curve as it leaves triangle T through side s: increasing side parameter
    auto& prev = c.arcs[(i + n - 1) % n];
    int dir = f.is_canonical(prev.tri, prev.out) ? 1 : -1;
    const mpq_class& p = c.points[i].pos;
    mpq_class bound = dir > 0 ? 1 : 0;
    for (auto& q : positions_on(c.points[i].edge, all))
      if ((dir > 0 && q > p && q < bound) || (dir < 0 && q < p && q > bound)) bound = q;
    out.points[i].pos = (p + bound) / 2;
  }
  return out;
}

std::vector<int> homology_vector(const TriSurface& f, const SurfaceCurve& c) {
  check_curve(f, c);
  std::vector<int> v(f.edges(), 0);
  const int n = c.length();
  // crossing i slides to the start of its edge's canonical side
  auto corner_of = [&](int tri, int side, int e) {
    int par0 = f.is_canonical(tri, side) ? 0 : 1;  // side parameter of the canonical start
    (void)e;
    return par0 == 0 ? side : (side + 1) % 3;
  };
  for (int i = 0; i < n; ++i) {
    auto& a = c.arcs[i];
    int k0 = corner_of(a.tri, a.in, c.points[i].edge);
    int k1 = corner_of(a.tri, a.out, c.points[(i + 1) % n].edge);
    if (k0 == k1) continue;
    int side = (k1 == (k0 + 1) % 3) ? k0 : k1;
    int sgn = (k1 == (k0 + 1) % 3) ? 1 : -1;
    v[f.edge(a.tri, side)] += f.is_canonical(a.tri, side) ? sgn : -sgn;
  }
  return v;
}

namespace detail {

MoveResult slide_point(const TriSurface&, const SurfaceCurve& c, int i, const mpq_class& pos) {
  const int n = c.length();
  if (i < 0 || i >= n) throw MoveError("no crossing " + std::to_string(i));
  if (pos <= 0 || pos >= 1) throw MoveError("slide leaves the edge");
  const mpq_class& p = c.points[i].pos;
  for (int j = 0; j < n; ++j) {
    if (j == i || c.points[j].edge != c.points[i].edge) continue;
    const mpq_class& q = c.points[j].pos;
    if ((q >= std::min(p, pos) && q <= std::max(p, pos)))
      throw MoveError("slide passes another crossing of the same curve");
  }
  MoveResult r;
  r.curve = c;
  r.curve.points[i].pos = pos;
  r.cost = kType1Cost;
  r.arc_map.resize(n);
  for (int j = 0; j < n; ++j) r.arc_map[j] = j;
  return r;
}

MoveResult over_vertex(const TriSurface& f, const SurfaceCurve& c, int i, int end,
                       const std::vector<const SurfaceCurve*>& others) {
  const int n = c.length();
  if (i < 0 || i >= n) throw MoveError("no crossing " + std::to_string(i));
  if (n < 2) throw MoveError("curve is too short for a vertex slide");
  if (end != 0 && end != 1) throw MoveError("edge end must be 0 or 1");
  const int e = c.points[i].edge;
  const mpq_class p = c.points[i].pos;
  const mpq_class ev = end;
  std::vector<const SurfaceCurve*> all{&c};
  all.insert(all.end(), others.begin(), others.end());
  for (auto& q : positions_on(e, all))
    if (q != p && ((q > std::min(p, ev)) && (q < std::max(p, ev))))
      throw MoveError("crossing is not next to the vertex");

  const int im = (i + n - 1) % n;
  const int t1 = c.arcs[im].tri, s1 = c.arcs[im].out;
  const int t2 = c.arcs[i].tri, s2 = c.arcs[i].in;
  int par = f.is_canonical(t1, s1) ? end : 1 - end;
  int k = par == 0 ? s1 : (s1 + 1) % 3;
  const int v = f.corner(t1, k);
  struct Crossing {
    int tri, side, corner;
  };
  std::vector<Crossing> cross;
  int tri = t1, x = s1 == k ? (k + 2) % 3 : k;
  std::vector<int> entered;
  for (int guard = 0;; ++guard) {
    if (guard > f.valence(v) + 2) throw MoveError("walk around the vertex does not close");
    cross.push_back({tri, x, k});
    auto [tn, sn] = f.across(tri, x);
    int kn = x == k ? (sn + 1) % 3 : sn;
    int xn = sn == kn ? (kn + 2) % 3 : kn;
    entered.push_back(sn);
    if (tn == t2 && xn == s2) break;
    tri = tn;
    k = kn;
    x = xn;
  }
  const int m = static_cast<int>(cross.size());
  if (m != f.valence(v) - 1) throw MoveError("walk around the vertex misses corners");

  std::vector<CurvePoint> fresh;
  SurfaceCurve extra;
  for (auto& cr : cross) {
    const int ee = f.edge(cr.tri, cr.side);
    int sp = cr.side == cr.corner ? 0 : 1;
    mpq_class endv = f.is_canonical(cr.tri, cr.side) ? sp : 1 - sp;
    auto qs = positions_on(ee, all);
    for (auto& fp : fresh)
      if (fp.edge == ee) qs.push_back(fp.pos);
    mpq_class near = 1 - endv;
    for (auto& q : qs)
      if ((endv == 0 && q < near) || (endv == 1 && q > near)) near = q;
    fresh.push_back({ee, (endv + near) / 2});
  }

  MoveResult r;
  r.length_change = m - 1;
  r.cost = type2_cost(f.valence(v));
  r.arc_map.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    if (j == i) {
      for (int t = 0; t < m; ++t) {
        r.curve.points.push_back(fresh[t]);
        if (t + 1 < m)
          r.curve.arcs.push_back({cross[t + 1].tri, entered[t], cross[t + 1].side});
        else
          r.curve.arcs.push_back({t2, entered[t], c.arcs[i].out});
      }
      r.arc_map[j] = static_cast<int>(r.curve.arcs.size()) - 1;
    } else {
      r.curve.points.push_back(c.points[j]);
      r.arc_map[j] = static_cast<int>(r.curve.arcs.size());
      if (j == im)
        r.curve.arcs.push_back({t1, c.arcs[im].in, cross[0].side});
      else
        r.curve.arcs.push_back(c.arcs[j]);
    }
  }
  check_curve(f, r.curve);
  return r;
}

MoveResult across_bigon(const TriSurface& f, const SurfaceCurve& c, int a,
                        const std::vector<const SurfaceCurve*>& others) {
  const int n = c.length();
  if (a < 0 || a >= n) throw MoveError("no arc " + std::to_string(a));
  if (n < 3) throw MoveError("curve would vanish");
  auto& arc = c.arcs[a];
  if (arc.in != arc.out) throw MoveError("arc does not return to its side");
  const int e = c.points[a].edge;
  const mpq_class& p = c.points[a].pos;
  const mpq_class& q = c.points[(a + 1) % n].pos;
  std::vector<const SurfaceCurve*> all{&c};
  all.insert(all.end(), others.begin(), others.end());
  for (auto& x : positions_on(e, all))
    if (x > std::min(p, q) && x < std::max(p, q)) throw MoveError("2-gon contains other crossings");
  auto& prev = c.arcs[(a + n - 1) % n];
  auto& next = c.arcs[(a + 1) % n];
  if (prev.tri != next.tri || prev.out != next.in) throw MoveError("2-gon arcs do not meet one triangle");
  SurfaceArc merged{prev.tri, prev.in, next.out};
  MoveResult r;
  r.length_change = -2;
  r.cost = kType3Cost;
  r.arc_map.assign(n, -1);
  for (int t = 0; t < n - 2; ++t) {
    int j = (a + 2 + t) % n;
    r.curve.points.push_back(c.points[j]);
    if (t < n - 3) {
      r.curve.arcs.push_back(c.arcs[j]);
      r.arc_map[j] = t;
    }
  }
  r.curve.arcs.push_back(merged);
  r.arc_map[(a + n - 1) % n] = n - 3;
  r.arc_map[(a + 1) % n] = n - 3;
  check_curve(f, r.curve);
  return r;
}

}  // namespace detail

BasicResult apply_basic_move(const TriSurface& f, const SurfaceCurve& c, int kind, int index, int end,
                             const mpq_class& pos, const std::vector<const SurfaceCurve*>& others) {
  check_curve(f, c);
  detail::MoveResult r;
  switch (kind) {
    case 1: r = detail::slide_point(f, c, index, pos); break;
    case 2: r = detail::over_vertex(f, c, index, end, others); break;
    case 3: r = detail::across_bigon(f, c, index, others); break;
    default: throw MoveError("unknown basic move kind " + std::to_string(kind));
  }
  return {std::move(r.curve), r.cost, r.length_change};
}

// ---------------------------------------------------------------------------

BasicConversion to_basic(const TriSurface& f, const SurfaceCurve& c) {
  check_curve(f, c);
  BasicConversion out;
  out.curve = c;
  return out;
}

BasicConversion to_basic(const TriSurface& f, const SurfaceWalk& w) {
  const auto& wv = w.vertices;
  const int m = static_cast<int>(wv.size());
  if (m < 3) throw IsotopyError("walk is too short");
  {
    auto s = wv;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw IsotopyError("walk is not embedded");
  }
  // corners around each vertex, counterclockwise
  std::vector<std::vector<std::pair<int, int>>> around(f.vertices());
  for (int i = 0; i < f.triangles(); ++i)
    for (int k = 0; k < 3; ++k) {
      int v = f.corner(i, k);
      if (!around[v].empty()) continue;
      std::pair<int, int> cur{i, k};
      do {
        around[v].push_back(cur);
        cur = f.next_around(cur.first, cur.second);
      } while (cur != std::make_pair(i, k) && around[v].size() <= static_cast<std::size_t>(f.valence(v)));
    }
  // edge-end t sits between corner t and corner t + 1; returns its far vertex
  auto far = [&](int v, int t) {
    auto [tri, k] = around[v][t];
    return f.corner(tri, (k + 2) % 3);
  };
  auto find_end = [&](int v, int u) {
    int hit = -1;
    for (int t = 0; t < static_cast<int>(around[v].size()); ++t)
      if (far(v, t) == u) {
        if (hit >= 0) throw IsotopyError("surface is not simplicial along the walk");
        hit = t;
      }
    if (hit < 0) throw IsotopyError("walk steps along a non-edge");
    return hit;
  };

  struct Event {
    int tri, side;
    mpq_class param;
  };
  std::vector<Event> ev;
  std::vector<int> side_of(m), a_of(m), b_of(m);
  BasicConversion out;
  out.crossings_at.resize(m);
  for (int j = 0; j < m; ++j) {
    int v = wv[j];
    const int d = static_cast<int>(around[v].size());
    int a = find_end(v, wv[(j + m - 1) % m]), b = find_end(v, wv[(j + 1) % m]);
    int nl = ((a - b - 1) % d + d) % d, nr = ((b - a - 1) % d + d) % d;
    side_of[j] = nl <= nr ? 0 : 1;  // 0: left
    a_of[j] = a;
    b_of[j] = b;
    out.crossings_at[j] = side_of[j] == 0 ? nl : nr;
    out.perturb_type2 += out.crossings_at[j] + 1;
  }
  for (int j = 0; j < m; ++j) {
    int v = wv[j];
    const int d = static_cast<int>(around[v].size());
    int a = a_of[j], b = b_of[j];
    if (side_of[j] == 0) {
      for (int t = a; ((t - b - 1) % d + d) % d > 0; t = (t + d - 1) % d) {
        auto [tri, k] = around[v][t];
        ev.push_back({tri, k, mpq_class(1, 4)});
      }
    } else {
      for (int t = (a + 1) % d; t != b; t = (t + 1) % d) {
        auto [tri, k] = around[v][t];
        ev.push_back({tri, (k + 2) % 3, mpq_class(3, 4)});
      }
    }
    if (side_of[j] != side_of[(j + 1) % m]) {
      if (side_of[j] == 0) {
        auto [tri, k] = around[v][(b + 1) % d];
        ev.push_back({tri, k, mpq_class(1, 2)});
      } else {
        auto [tri, k] = around[v][b];
        ev.push_back({tri, (k + 2) % 3, mpq_class(1, 2)});
      }
    }
  }
  if (ev.empty()) throw IsotopyError("walk gives an empty basic curve");
  const int n = static_cast<int>(ev.size());
  for (int t = 0; t < n; ++t) {
    auto& e = ev[t];
    out.curve.points.push_back({f.edge(e.tri, e.side), f.is_canonical(e.tri, e.side) ? e.param : 1 - e.param});
    auto [tn, sn] = f.across(e.tri, e.side);
    auto& nx = ev[(t + 1) % n];
    if (nx.tri != tn) throw IsotopyError("internal: perturbed walk leaves its triangle");
    out.curve.arcs.push_back({tn, sn, nx.side});
  }
  // points sit on the edge leaving each event; arcs follow them
  check_curve(f, out.curve);
  out.straighten_type2 = 2L * n;
  return out;
}

}  // namespace km::iso
