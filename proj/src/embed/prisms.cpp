#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "km/embed.hpp"

namespace km {

namespace {

using I64 = std::int64_t;

bool same_cycle(const Tri& a, const Tri& b) {
  for (int s = 0; s < 3; ++s)
    if (a[0] == b[s] && a[1] == b[(s + 1) % 3] && a[2] == b[(s + 2) % 3]) return true;
  return false;
}

I64 det3(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  I64 u[3], v[3], w[3];
  for (int i = 0; i < 3; ++i) {
    u[i] = b[i] - a[i];
    v[i] = c[i] - a[i];
    w[i] = d[i] - a[i];
  }
  return u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0]);
}

}  // namespace

int PrismComplex::point_label(int v, int w, int slab) const {
  std::array<int, 2> k{std::min(v, w), std::max(v, w)};
  auto it = std::lower_bound(edges.begin(), edges.end(), k);
  if (it == edges.end() || *it != k) throw EmbedError("not an edge");
  return point_base + slab * static_cast<int>(edges.size()) + static_cast<int>(it - edges.begin());
}

PrismComplex build_prisms(const AugmentedGraph& g, const GridEmbedding& e, int slabs) {
  PrismComplex p;
  p.vertices = g.vertices();
  p.edges = g.edges();
  const Tri outer{g.frame[2], g.frame[1], g.frame[0]};
  std::vector<Tri> faces;
  for (auto& t : g.triangles)
    if (!same_cycle(t, outer)) faces.push_back(t);
  p.bounded_faces = static_cast<int>(faces.size());
  const int nv = p.vertices, ne = static_cast<int>(p.edges.size()), nf = p.bounded_faces;
  p.point_base = (slabs + 1) * nv;
  p.centre_base = p.point_base + slabs * ne;
  p.label_coords.assign(p.centre_base + slabs * nf, Point3{0, 0, 0});
  for (int l = 0; l <= slabs; ++l)
    for (int v = 0; v < nv; ++v)
      p.label_coords[p.layer_label(v, l)] = {3 * e.xy[v][0], 3 * e.xy[v][1], static_cast<I64>(2 * l - slabs)};
  for (int s = 0; s < slabs; ++s) {
    const I64 z = 2 * s + 1 - slabs;
    for (auto& [a, b] : p.edges)
      p.label_coords[p.point_label(a, b, s)] = {2 * e.xy[a][0] + e.xy[b][0], 2 * e.xy[a][1] + e.xy[b][1], z};
    for (int f = 0; f < nf; ++f) {
      const Tri& t = faces[f];
      p.label_coords[p.centre_base + s * nf + f] = {e.xy[t[0]][0] + e.xy[t[1]][0] + e.xy[t[2]][0],
                                                    e.xy[t[0]][1] + e.xy[t[1]][1] + e.xy[t[2]][1], z};
    }
  }
  for (int s = 0; s < slabs; ++s)
    for (int f = 0; f < nf; ++f) {
      const Tri& t = faces[f];
      const int c = p.centre_base + s * nf + f;
      auto lo = [&](int v) { return p.layer_label(v, s); };
      auto hi = [&](int v) { return p.layer_label(v, s + 1); };
      p.tets.push_back({c, lo(t[0]), lo(t[1]), lo(t[2])});
      p.tets.push_back({c, hi(t[0]), hi(t[1]), hi(t[2])});
      for (int i = 0; i < 3; ++i) {
        int u = t[i], v = t[(i + 1) % 3];
        int q = p.point_label(u, v, s);
        p.tets.push_back({c, q, lo(u), lo(v)});
        p.tets.push_back({c, q, lo(v), hi(v)});
        p.tets.push_back({c, q, hi(v), hi(u)});
        p.tets.push_back({c, q, hi(u), lo(u)});
      }
    }
  return p;
}

std::vector<std::vector<int>> route_knot(const AugmentedGraph& g, const PrismComplex& p) {
  const Diagram& d = g.base;
  const int mid = 1;  // middle slab between layers 1 and 2
  auto low = [&](int v) { return p.layer_label(v, mid); };
  std::vector<std::vector<int>> out;
  std::vector<char> used(d.darts(), 0);
  for (int start = 0; start < d.darts(); ++start) {
    if (used[start]) continue;
    std::vector<int> path;
    int o = start;
    do {
      used[o] = 1;
      used[dart_turn(o, 2)] = 1;
      const int c = dart_crossing(o), in = dart_turn(o, 2);
      if (!dart_over(o)) {
        path.push_back(low(c));
      } else {
        path.push_back(p.point_label(c, g.near[in], mid));
        path.push_back(p.layer_label(c, mid + 1));
        path.push_back(p.point_label(c, g.near[o], mid));
      }
      path.push_back(low(g.near[o]));
      path.push_back(low(g.near[d.mate(o)]));
      o = dart_turn(d.mate(o), 2);
    } while (o != start);
    out.push_back(std::move(path));
  }
  for (auto& t : g.loop_triangles) out.push_back({low(t[0]), low(t[1]), low(t[2])});
  return out;
}

EmbeddedComplement build_complement_input(const Diagram& d) {
  validate(d);
  EmbeddedComplement ec;
  ec.n = crossing_measure(d);
  AugmentedGraph g = augment(d);
  ec.m = g.m;
  GridEmbedding e = grid_embed(g);
  std::string why;
  if (!is_planar_drawing(g.triangles, g.frame, e, &why)) throw EmbedError("grid drawing: " + why);
  PrismComplex p = build_prisms(g, e);
  ec.prisms = p.bounded_faces;
  std::vector<int> cls;
  ec.polytope = from_simplices(p.tets, "outer_sphere", &cls);
  ec.polytope.check_manifold();
  std::vector<Point3> coords(ec.polytope.vertices());
  for (int l = 0; l < static_cast<int>(cls.size()); ++l)
    if (cls[l] >= 0) coords[cls[l]] = p.label_coords[l];
  ec.polytope.set_coords(coords);

  auto routes = route_knot(g, p);
  for (auto& r : routes) {
    PLCurve c;
    std::vector<QPoint> pts;
    for (int l : r) {
      c.vertices.push_back(cls.at(l));
      const Point3& q = p.label_coords[l];
      pts.push_back({mpq_class(static_cast<long>(q[0])), mpq_class(static_cast<long>(q[1])),
                     mpq_class(static_cast<long>(q[2]))});
    }
    check_curve(ec.polytope, c);
    ec.knot.push_back(std::move(c));
    ec.link.comps.push_back(std::move(pts));
  }
  for (int c = 0; c < g.crossings; ++c)
    ec.crossing_columns.push_back({cls[p.layer_label(c, 1)], cls[p.layer_label(c, 2)]});

  // (i) size
  const long t = ec.polytope.size();
  ec.tet_bound_ok = ec.n >= 1 && t <= 840L * ec.n;
  ec.exact_count_ok = t == 84L * (ec.m + 1);
  // (ii) box
  ec.box_ok = true;
  for (auto& q : coords) {
    if (q[0] < 0 || q[0] > 30L * ec.n || q[1] < 0 || q[1] >= 30L * ec.n || q[2] < -6 || q[2] > 6) ec.box_ok = false;
  }
  // (iii) interior and projection
  std::set<int> knot_vertices;
  for (auto& c : ec.knot) knot_vertices.insert(c.vertices.begin(), c.vertices.end());
  ec.interior_ok = true;
  for (int v : knot_vertices)
    if (ec.polytope.vertex_on_boundary(v)) ec.interior_ok = false;
  ProjectionReport pr = project(ec.link);
  ec.projection_ok = pr.regular && isomorphic(pr.diagram, d);
  ec.projection_witness = pr.regular ? (ec.projection_ok ? "" : "diagram differs") : pr.witness;

  // convexity: every boundary face supports the polytope, and the pieces fill its hull
  ec.convex_ok = true;
  I64 volume = 0;
  for (int i = 0; i < static_cast<int>(p.tets.size()); ++i) {
    auto& q = p.tets[i];
    I64 v = det3(p.label_coords[q[0]], p.label_coords[q[1]], p.label_coords[q[2]], p.label_coords[q[3]]);
    if (v == 0) ec.convex_ok = false;
    volume += v < 0 ? -v : v;
    for (int f = 0; f < 4; ++f) {
      if (!ec.polytope.gluing(i, f).boundary()) continue;
      std::array<Point3, 3> tri;
      int k = 0;
      for (int a = 0; a < 4; ++a)
        if (a != f) tri[k++] = p.label_coords[q[a]];
      int inner = 0;
      for (auto& x : coords) {
        I64 s = det3(tri[0], tri[1], tri[2], x);
        int sg = (s > 0) - (s < 0);
        if (sg == 0) continue;
        if (inner == 0) inner = sg;
        if (sg != inner) ec.convex_ok = false;
      }
    }
  }
  auto& a = coords[cls[p.layer_label(g.frame[0], 0)]];
  auto& b = coords[cls[p.layer_label(g.frame[1], 0)]];
  auto& c = coords[cls[p.layer_label(g.frame[2], 0)]];
  I64 area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  if (volume != 18 * area2) ec.convex_ok = false;
  return ec;
}

std::string EmbeddedComplement::certificate() const {
  nlohmann::json j;
  const long t = polytope.size();
  j["n"] = n;
  j["m"] = m;
  j["prisms_per_slab"] = prisms;
  j["tetrahedra"] = t;
  j["bound_840n"] = 840L * n;
  j["count_84_m_plus_1"] = 84L * (m + 1);
  j["construction_count"] = construction_tets(m);
  std::array<std::int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
  bool first = true;
  for (auto& q : polytope.coords())
    for (int i = 0; i < 3; ++i) {
      if (first || q[i] < lo[i]) lo[i] = q[i];
      if (first || q[i] > hi[i]) hi[i] = q[i];
      if (i == 2) first = false;
    }
  j["box"] = {{"min", lo}, {"max", hi}};
  j["checks"] = {{"tetrahedra_le_840n", tet_bound_ok}, {"tetrahedra_eq_84_m_plus_1", exact_count_ok},
                 {"box", box_ok},        {"knot_interior", interior_ok},
                 {"convex", convex_ok},  {"projection_isomorphic", projection_ok}};
  if (!projection_witness.empty()) j["projection_witness"] = projection_witness;
  int segs = 0;
  for (auto& c : knot) segs += static_cast<int>(c.vertices.size());
  j["knot_segments"] = segs;
  j["link_components"] = knot.size();
  return j.dump(2);
}

}  // namespace km
