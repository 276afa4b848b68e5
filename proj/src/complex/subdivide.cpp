#include <algorithm>
#include <set>

#include "km/complex.hpp"

namespace km {

Triangulation barycentric_subdivide(const Triangulation& t, SubdivisionMap* map) {
  const int n = t.size();
  std::vector<std::array<Gluing, 4>> g(24 * static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 24; ++s) {
      Perm4 sigma = Perm4::from_index(s);
      auto& row = g[24 * i + s];
      for (int k = 0; k < 3; ++k) {
        Perm4 tau = sigma;
        std::swap(tau.p[k], tau.p[k + 1]);
        row[k] = Gluing{24 * i + tau.index(), k, Perm4{}, ""};
      }
      const Gluing& old = t.gluing(i, sigma[3]);
      if (old.boundary()) {
        row[3] = Gluing{-1, -1, Perm4{}, old.mark};
      } else {
        Perm4 s2 = old.perm * sigma;
        row[3] = Gluing{24 * old.tet + s2.index(), 3, Perm4{}, ""};
      }
    }
  }
  Triangulation out(std::move(g));
  out.provenance.depth = t.provenance.depth + 1;
  out.provenance.base_tets = t.provenance.depth == 0 ? n : t.provenance.base_tets;

  auto new_vertex = [&](int tet, int k, auto pred) {
    for (int s = 0; s < 24; ++s) {
      Perm4 sigma = Perm4::from_index(s);
      if (pred(sigma)) return out.vertex(24 * tet + s, k);
    }
    throw TriangulationError("subdivision lookup failed");
  };
  SubdivisionMap m;
  m.vertex.resize(t.vertices());
  m.edge.resize(t.edges());
  m.face.resize(t.faces());
  m.tet.resize(n);
  for (int v = 0; v < t.vertices(); ++v) {
    auto [ti, a] = t.vertex_rep(v);
    m.vertex[v] = new_vertex(ti, 0, [a = a](const Perm4& p) { return p[0] == a; });
  }
  for (int e = 0; e < t.edges(); ++e) {
    auto [ti, k] = t.edge_rep(e);
    int a = kEdgeVerts[k][0], b = kEdgeVerts[k][1];
    m.edge[e] = new_vertex(ti, 1, [a, b](const Perm4& p) { return p[0] == a && p[1] == b; });
  }
  for (int f = 0; f < t.faces(); ++f) {
    auto [ti, k] = t.face_rep(f);
    m.face[f] = new_vertex(ti, 2, [k = k](const Perm4& p) { return p[3] == k; });
  }
  for (int i = 0; i < n; ++i) m.tet[i] = out.vertex(24 * i, 3);

  if (t.has_coords()) {
    std::vector<Point3> c(out.vertices());
    const auto& oc = t.coords();
    for (int i = 0; i < n; ++i)
      for (int s = 0; s < 24; ++s) {
        Perm4 sigma = Perm4::from_index(s);
        Point3 sum{0, 0, 0};
        for (int k = 0; k < 4; ++k) {
          for (int d = 0; d < 3; ++d) sum[d] += oc[t.vertex(i, sigma[k])][d];
          for (int d = 0; d < 3; ++d) c[out.vertex(24 * i + s, k)][d] = sum[d] * 12 / (k + 1);
        }
      }
    out.set_coords(std::move(c));
  }
  if (map) *map = std::move(m);
  return out;
}

void check_curve(const Triangulation& t, const PLCurve& k) {
  const auto& w = k.vertices;
  if (w.size() < 3) throw TriangulationError("curve needs at least 3 vertices");
  std::set<int> seen;
  for (int v : w) {
    if (v < 0 || v >= t.vertices()) throw TriangulationError("curve vertex out of range");
    if (!seen.insert(v).second) throw TriangulationError("curve is not embedded: vertex " + std::to_string(v) + " repeats");
  }
  for (size_t i = 0; i < w.size(); ++i)
    if (!t.edge_between(w[i], w[(i + 1) % w.size()]))
      throw TriangulationError("curve step " + std::to_string(i) + " is not an edge");
}

PLCurve subdivide_curve(const Triangulation& t, const SubdivisionMap& m, const PLCurve& k) {
  PLCurve out;
  const auto& w = k.vertices;
  for (size_t i = 0; i < w.size(); ++i) {
    auto e = t.edge_between(w[i], w[(i + 1) % w.size()]);
    if (!e) throw TriangulationError("curve step is not an edge");
    out.vertices.push_back(m.vertex[w[i]]);
    out.vertices.push_back(m.edge[*e]);
  }
  return out;
}

SolidTorusNbhd regular_neighborhood(const Triangulation& t, const PLCurve& k) {
  if (t.provenance.depth < 2) throw TriangulationError("regular neighbourhood needs a second barycentric subdivision");
  check_curve(t, k);
  if (k.vertices.size() % 4) throw TriangulationError("core length is not a multiple of 4");
  for (int v : k.vertices)
    if (t.vertex_on_boundary(v)) throw TriangulationError("curve touches the boundary at vertex " + std::to_string(v));

  SolidTorusNbhd r;
  r.core = k.vertices;
  std::set<int> core(k.vertices.begin(), k.vertices.end());
  std::vector<char> in(t.size(), 0);
  for (int i = 0; i < t.size(); ++i)
    for (int a = 0; a < 4; ++a)
      if (core.count(t.vertex(i, a))) in[i] = 1;
  for (int i = 0; i < t.size(); ++i)
    if (in[i]) r.tets.push_back(i);

  std::set<int> vs, es;
  for (int i : r.tets)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = t.gluing(i, f);
      if (g.boundary()) throw TriangulationError("star of the curve meets the boundary");
      if (in[g.tet]) continue;
      r.peripheral.push_back({i, f});
      for (int a = 0; a < 4; ++a)
        if (a != f) vs.insert(t.vertex(i, a));
      for (int e = 0; e < 6; ++e)
        if (kEdgeVerts[e][0] != f && kEdgeVerts[e][1] != f) es.insert(t.edge(i, e));
    }
  r.euler = static_cast<int>(vs.size()) - static_cast<int>(es.size()) + static_cast<int>(r.peripheral.size());
  if (r.euler != 0) throw TriangulationError("internal: peripheral surface has Euler characteristic " + std::to_string(r.euler));
  return r;
}

Complement truncated_complement(const Triangulation& t, const SolidTorusNbhd& r) {
  Complement c;
  c.tet_map.assign(t.size(), 0);
  for (int i : r.tets) c.tet_map[i] = -1;
  int next = 0;
  std::vector<int> kept;
  for (int i = 0; i < t.size(); ++i)
    if (c.tet_map[i] >= 0) {
      c.tet_map[i] = next++;
      kept.push_back(i);
    }
  std::vector<std::array<Gluing, 4>> g(kept.size());
  for (int ni = 0; ni < static_cast<int>(kept.size()); ++ni)
    for (int f = 0; f < 4; ++f) {
      Gluing old = t.gluing(kept[ni], f);
      if (old.boundary()) {
        if (old.mark.empty()) old.mark = "outer";
        g[ni][f] = old;
      } else if (c.tet_map[old.tet] < 0) {
        g[ni][f] = Gluing{-1, -1, Perm4{}, "peripheral_torus"};
      } else {
        old.tet = c.tet_map[old.tet];
        g[ni][f] = old;
      }
    }
  c.tri = Triangulation(std::move(g));
  c.tri.provenance = t.provenance;
  c.vertex_map.assign(t.vertices(), -1);
  for (int ni = 0; ni < static_cast<int>(kept.size()); ++ni)
    for (int a = 0; a < 4; ++a) c.vertex_map[t.vertex(kept[ni], a)] = c.tri.vertex(ni, a);
  if (t.has_coords()) {
    std::vector<Point3> pc(c.tri.vertices());
    for (int v = 0; v < t.vertices(); ++v)
      if (c.vertex_map[v] >= 0) pc[c.vertex_map[v]] = t.coords()[v];
    c.tri.set_coords(std::move(pc));
  }
  return c;
}

}  // namespace km
