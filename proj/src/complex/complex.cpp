#include "km/complex.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace km {

const int kEdgeVerts[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

int local_edge(int a, int b) {
  if (a > b) std::swap(a, b);
  for (int k = 0; k < 6; ++k)
    if (kEdgeVerts[k][0] == a && kEdgeVerts[k][1] == b) return k;
  throw std::invalid_argument("local_edge: not an edge");
}

Perm4 Perm4::inverse() const {
  Perm4 r;
  for (int i = 0; i < 4; ++i) r.p[p[i]] = static_cast<std::uint8_t>(i);
  return r;
}

Perm4 Perm4::operator*(const Perm4& o) const {
  Perm4 r;
  for (int i = 0; i < 4; ++i) r.p[i] = p[o.p[i]];
  return r;
}

int Perm4::sign() const {
  int inv = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) inv += p[i] > p[j];
  return inv % 2 ? -1 : 1;
}

int Perm4::index() const {
  static const int fact[4] = {6, 2, 1, 1};
  int idx = 0;
  for (int i = 0; i < 4; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < 4; ++j) smaller += p[j] < p[i];
    idx += smaller * fact[i];
  }
  return idx;
}

Perm4 Perm4::from_index(int i) {
  std::array<std::uint8_t, 4> a{0, 1, 2, 3};
  for (int k = 0; k < i; ++k) std::next_permutation(a.begin(), a.end());
  Perm4 r;
  r.p = a;
  return r;
}

std::string Perm4::str() const {
  std::string s;
  for (int i = 0; i < 4; ++i) s += static_cast<char>('0' + p[i]);
  return s;
}

Perm4 Perm4::parse(const std::string& s) {
  if (s.size() != 4) throw TriangulationError("bad permutation '" + s + "'");
  Perm4 r;
  int seen = 0;
  for (int i = 0; i < 4; ++i) {
    int v = s[i] - '0';
    if (v < 0 || v > 3 || (seen >> v & 1)) throw TriangulationError("bad permutation '" + s + "'");
    seen |= 1 << v;
    r.p[i] = static_cast<std::uint8_t>(v);
  }
  return r;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  std::vector<int> parity;  // relative to parent
  explicit UnionFind(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  std::pair<int, int> find(int x) {
    int par = 0, r = x;
    while (parent[r] != r) {
      par ^= parity[r];
      r = parent[r];
    }
    // compress
    int cur = x, cp = par;
    while (parent[cur] != cur) {
      int next = parent[cur], np = cp ^ parity[cur];
      parent[cur] = r;
      parity[cur] = cp;
      cur = next;
      cp = np;
    }
    return {r, par};
  }
  // returns false on parity conflict
  bool unite(int a, int b, int rel = 0) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    parent[rb] = ra;
    parity[rb] = pa ^ pb ^ rel;
    return true;
  }
};

// Assigns class ids in order of first occurrence.
std::vector<int> number_classes(UnionFind& uf, int n, int& count) {
  std::vector<int> root_id(n, -1), out(n);
  count = 0;
  for (int i = 0; i < n; ++i) {
    int r = uf.find(i).first;
    if (root_id[r] < 0) root_id[r] = count++;
    out[i] = root_id[r];
  }
  return out;
}

}  // namespace

Triangulation::Triangulation(std::vector<std::array<Gluing, 4>> gluings) : glue_(std::move(gluings)) { build(); }

void Triangulation::build() {
  const int n = size();
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (g.boundary()) continue;
      auto where = "face (" + std::to_string(t) + "," + std::to_string(f) + ")";
      if (g.tet >= n || g.face < 0 || g.face > 3) throw TriangulationError(where + " glued out of range");
      if (g.perm[f] != g.face) throw TriangulationError(where + " permutation does not carry the face");
      const Gluing& back = glue_[g.tet][g.face];
      if (back.tet != t || back.face != f || !(back.perm == g.perm.inverse()))
        throw TriangulationError("non-involutive gluing at " + where);
      if (g.tet == t && g.face == f) throw TriangulationError(where + " glued to itself");
    }
  }

  UnionFind vu(4 * n), eu(6 * n), fu(4 * n);
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (g.boundary()) continue;
      fu.unite(4 * t + f, 4 * g.tet + g.face);
      for (int a = 0; a < 4; ++a)
        if (a != f) vu.unite(4 * t + a, 4 * g.tet + g.perm[a]);
      for (int k = 0; k < 6; ++k) {
        int a = kEdgeVerts[k][0], b = kEdgeVerts[k][1];
        if (a == f || b == f) continue;
        int pa = g.perm[a], pb = g.perm[b];
        if (!eu.unite(6 * t + k, 6 * g.tet + local_edge(pa, pb), pa > pb ? 1 : 0))
          throw TriangulationError("edge identified with itself in reverse");
      }
    }
  }
  vclass_ = number_classes(vu, 4 * n, nv_);
  eclass_ = number_classes(eu, 6 * n, ne_);
  fclass_ = number_classes(fu, 4 * n, nf_);

  vrep_.assign(nv_, {-1, -1});
  erep_.assign(ne_, {-1, -1});
  frep_.assign(nf_, {-1, -1});
  for (int i = 0; i < 4 * n; ++i) {
    if (vrep_[vclass_[i]].first < 0) vrep_[vclass_[i]] = {i / 4, i % 4};
    if (frep_[fclass_[i]].first < 0) frep_[fclass_[i]] = {i / 4, i % 4};
  }
  esign_.assign(6 * n, 1);
  std::vector<int> rep_parity(ne_, -1);
  for (int i = 0; i < 6 * n; ++i) {
    int par = eu.find(i).second;
    int c = eclass_[i];
    if (rep_parity[c] < 0) {
      rep_parity[c] = par;
      erep_[c] = {i / 6, i % 6};
    }
    esign_[i] = (par == rep_parity[c]) ? 1 : -1;
  }

  vbd_.assign(nv_, 0);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      if (glue_[t][f].boundary())
        for (int a = 0; a < 4; ++a)
          if (a != f) vbd_[vertex(t, a)] = 1;

  edge_lookup_.clear();
  for (int e = 0; e < ne_; ++e) {
    auto [u, v] = edge_ends(e);
    edge_lookup_.emplace(std::minmax(u, v), e);
  }
}

std::array<int, 2> Triangulation::edge_ends(int e) const {
  auto [t, k] = erep_[e];
  return {vertex(t, kEdgeVerts[k][0]), vertex(t, kEdgeVerts[k][1])};
}

bool Triangulation::face_is_boundary(int f) const {
  auto [t, k] = frep_[f];
  return glue_[t][k].boundary();
}

int Triangulation::interior_faces() const {
  int c = 0;
  for (int f = 0; f < nf_; ++f) c += !face_is_boundary(f);
  return c;
}

void Triangulation::set_coords(std::vector<Point3> c) {
  if (!c.empty() && static_cast<int>(c.size()) != nv_)
    throw TriangulationError("coordinate count does not match vertex count");
  coords_ = std::move(c);
}

std::optional<int> Triangulation::edge_between(int u, int v) const {
  auto [lo, hi] = edge_lookup_.equal_range(std::minmax(u, v));
  if (lo == hi) return std::nullopt;
  if (std::next(lo) != hi) throw TriangulationError("several edges join the same vertices");
  return lo->second;
}

bool Triangulation::is_simplicial() const {
  for (int t = 0; t < size(); ++t) {
    std::set<int> vs;
    for (int a = 0; a < 4; ++a) vs.insert(vertex(t, a));
    if (vs.size() != 4) return false;
  }
  if (static_cast<int>(edge_lookup_.size()) != ne_) return false;
  for (auto it = edge_lookup_.begin(); it != edge_lookup_.end(); ++it) {
    auto nx = std::next(it);
    if (nx != edge_lookup_.end() && nx->first == it->first) return false;
  }
  // distinct tetrahedra must have distinct vertex sets
  std::set<std::array<int, 4>> seen;
  for (int t = 0; t < size(); ++t) {
    std::array<int, 4> q{vertex(t, 0), vertex(t, 1), vertex(t, 2), vertex(t, 3)};
    std::sort(q.begin(), q.end());
    if (!seen.insert(q).second) return false;
  }
  return true;
}

std::vector<Triangulation::BoundaryComponent> Triangulation::boundary_components() const {
  // boundary faces are unglued (tet, face) pairs; each is its own class
  std::vector<int> bfaces;
  for (int f = 0; f < nf_; ++f)
    if (face_is_boundary(f)) bfaces.push_back(f);
  std::vector<int> pos(nf_, -1);
  for (int i = 0; i < static_cast<int>(bfaces.size()); ++i) pos[bfaces[i]] = i;

  // per boundary edge class: list of (face index, induced direction)
  std::map<int, std::vector<std::pair<int, int>>> by_edge;
  for (int i = 0; i < static_cast<int>(bfaces.size()); ++i) {
    auto [t, f] = frep_[bfaces[i]];
    int vs[3], m = 0;
    for (int a = 0; a < 4; ++a)
      if (a != f) vs[m++] = a;
    // orientation (vs0, vs1, vs2): edges 0->1, 1->2 forward, 0->2 backward
    const int sides[3][3] = {{vs[0], vs[1], 1}, {vs[1], vs[2], 1}, {vs[0], vs[2], -1}};
    for (auto& s : sides) {
      int k = local_edge(s[0], s[1]);
      by_edge[edge(t, k)].push_back({i, s[2] * edge_sign(t, k)});
    }
  }
  const int nb = static_cast<int>(bfaces.size());
  UnionFind uf(nb);
  std::vector<int> orient_conflict;
  for (auto& [e, inc] : by_edge) {
    if (inc.size() != 2) throw TriangulationError("boundary edge with " + std::to_string(inc.size()) + " boundary faces");
    // coherent iff the two induced directions are opposite after relative flips
    int rel = inc[0].second == inc[1].second ? 1 : 0;
    if (!uf.unite(inc[0].first, inc[1].first, rel)) orient_conflict.push_back(inc[0].first);
  }
  int nc = 0;
  std::vector<int> comp = number_classes(uf, nb, nc);
  std::vector<BoundaryComponent> out(nc);
  for (int i = 0; i < nb; ++i) out[comp[i]].faces.push_back(bfaces[i]);
  for (int i : orient_conflict) out[comp[i]].orientable = false;
  for (auto& c : out) {
    std::set<int> vs, es;
    for (int f : c.faces) {
      auto [t, k] = frep_[f];
      for (int a = 0; a < 4; ++a)
        if (a != k) vs.insert(vertex(t, a));
      for (int j = 0; j < 6; ++j)
        if (kEdgeVerts[j][0] != k && kEdgeVerts[j][1] != k) es.insert(edge(t, j));
    }
    c.euler = static_cast<int>(vs.size()) - static_cast<int>(es.size()) + static_cast<int>(c.faces.size());
    auto [t0, k0] = frep_[c.faces[0]];
    c.mark = glue_[t0][k0].mark;
  }
  return out;
}

void Triangulation::check_manifold() const {
  const int n = size();
  // link vertices: (t, a, b) = the point of edge ab near vertex a
  auto id = [](int t, int a, int b) { return 16 * t + 4 * a + b; };
  UnionFind lu(16 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = glue_[t][f];
      if (g.boundary()) continue;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != f && b != f && a != b) lu.unite(id(t, a, b), id(g.tet, g.perm[a], g.perm[b]));
    }
  std::vector<std::set<int>> lverts(nv_);
  std::vector<long> tris(nv_, 0), bsides(nv_, 0);
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a) {
      int v = vertex(t, a);
      ++tris[v];
      for (int b = 0; b < 4; ++b) {
        if (b == a) continue;
        lverts[v].insert(lu.find(id(t, a, b)).first);
        if (glue_[t][b].boundary()) ++bsides[v];
      }
    }
  for (int v = 0; v < nv_; ++v) {
    long edges2 = 3 * tris[v] + bsides[v];
    long chi = static_cast<long>(lverts[v].size()) - edges2 / 2 + tris[v];
    long want = bsides[v] == 0 ? 2 : 1;
    if (chi != want)
      throw TriangulationError("link of vertex " + std::to_string(v) + " has Euler characteristic " +
                               std::to_string(chi) + ", expected " + std::to_string(want));
  }
  for (const auto& c : boundary_components())
    for (int f : c.faces) {
      auto [t, k] = frep_[f];
      if (glue_[t][k].mark != c.mark) throw TriangulationError("boundary marks split a boundary component");
    }
}

// ---- text format ----

Triangulation read_triangulation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<std::array<Gluing, 4>> g;
  std::vector<std::pair<int, Point3>> coords;
  std::map<std::string, std::vector<std::pair<int, int>>> cycles;
  Provenance prov;
  int row = 0, lineno = 0;
  auto fail = [&](const std::string& m) {
    throw TriangulationError("line " + std::to_string(lineno) + ": " + m);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head.rfind("tets=", 0) == 0) {
      n = std::stoi(head.substr(5));
      if (n < 0) fail("negative size");
      g.assign(n, {});
    } else if (head == "coord") {
      int v;
      Point3 p;
      if (!(ls >> v >> p[0] >> p[1] >> p[2])) fail("bad coord line");
      coords.push_back({v, p});
    } else if (head == "cycle") {
      std::string name, tok;
      if (!(ls >> name)) fail("cycle needs a name");
      auto& c = cycles[name];
      while (ls >> tok) {
        if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-')) fail("cycle step must be +e or -e");
        c.push_back({std::stoi(tok.substr(1)), tok[0] == '+' ? 1 : -1});
      }
    } else if (head == "provenance") {
      std::string tok;
      while (ls >> tok) {
        if (tok.rfind("depth=", 0) == 0) prov.depth = std::stoi(tok.substr(6));
        else if (tok.rfind("base=", 0) == 0) prov.base_tets = std::stoi(tok.substr(5));
        else fail("unknown provenance field " + tok);
      }
    } else if (head == "knot") {
      continue;  // curve sections are read by their consumers
    } else {
      if (n < 0) fail("missing tets= header");
      if (row >= n) fail("too many tetrahedron rows");
      std::istringstream rs(line);
      for (int f = 0; f < 4; ++f) {
        std::string rec;
        if (!(rs >> rec)) fail("expected 4 face records");
        if (rec.rfind("bd", 0) == 0) {
          g[row][f].tet = -1;
          if (rec.size() > 2) {
            if (rec[2] != ':') fail("bad boundary record " + rec);
            g[row][f].mark = rec.substr(3);
          }
          continue;
        }
        auto c1 = rec.find(':'), c2 = rec.rfind(':');
        if (c1 == std::string::npos || c1 == c2) fail("bad face record " + rec);
        try {
          g[row][f].tet = std::stoi(rec.substr(0, c1));
          g[row][f].face = std::stoi(rec.substr(c1 + 1, c2 - c1 - 1));
        } catch (const std::exception&) {
          fail("bad face record " + rec);
        }
        g[row][f].perm = Perm4::parse(rec.substr(c2 + 1));
      }
      std::string extra;
      if (rs >> extra) fail("trailing data in row");
      ++row;
    }
  }
  if (n < 0) throw TriangulationError("missing tets= header");
  if (row != n) throw TriangulationError("expected " + std::to_string(n) + " rows, got " + std::to_string(row));
  Triangulation t(std::move(g));
  if (!coords.empty()) {
    std::vector<Point3> c(t.vertices());
    std::vector<char> have(t.vertices(), 0);
    for (auto& [v, p] : coords) {
      if (v < 0 || v >= t.vertices()) throw TriangulationError("coord for unknown vertex");
      c[v] = p;
      have[v] = 1;
    }
    if (std::count(have.begin(), have.end(), 0)) throw TriangulationError("coordinates missing for some vertices");
    t.set_coords(std::move(c));
  }
  for (auto& [name, c] : cycles)
    for (auto [e, s] : c)
      if (e < 0 || e >= t.edges()) throw TriangulationError("cycle " + name + " names unknown edge");
  t.cycles = std::move(cycles);
  t.provenance = prov;
  t.check_manifold();
  return t;
}

std::string write_triangulation(const Triangulation& t) {
  std::ostringstream out;
  out << "tets=" << t.size() << "\n";
  if (t.provenance.depth || t.provenance.base_tets)
    out << "provenance depth=" << t.provenance.depth << " base=" << t.provenance.base_tets << "\n";
  for (int i = 0; i < t.size(); ++i) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = t.gluing(i, f);
      if (f) out << ' ';
      if (g.boundary())
        out << "bd" << (g.mark.empty() ? "" : ":" + g.mark);
      else
        out << g.tet << ':' << g.face << ':' << g.perm.str();
    }
    out << "\n";
  }
  if (t.has_coords())
    for (int v = 0; v < t.vertices(); ++v) {
      auto& p = t.coords()[v];
      out << "coord " << v << ' ' << p[0] << ' ' << p[1] << ' ' << p[2] << "\n";
    }
  for (auto& [name, c] : t.cycles) {
    out << "cycle " << name;
    for (auto [e, s] : c) out << ' ' << (s > 0 ? '+' : '-') << e;
    out << "\n";
  }
  return out.str();
}

std::string write_knot(const std::vector<PLCurve>& k) {
  std::ostringstream out;
  for (auto& c : k) {
    out << "knot";
    for (int v : c.vertices) out << ' ' << v;
    out << "\n";
  }
  return out.str();
}

std::vector<PLCurve> read_knot(const std::string& text) {
  std::vector<PLCurve> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head != "knot") continue;
    PLCurve c;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      int v = -1;
      try {
        v = std::stoi(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 0) throw TriangulationError("bad knot vertex " + tok);
      c.vertices.push_back(v);
    }
    out.push_back(std::move(c));
  }
  return out;
}

Triangulation from_simplices(const std::vector<std::array<int, 4>>& tets, const std::string& mark,
                             std::vector<int>* vertex_of_label) {
  const int n = static_cast<int>(tets.size());
  std::vector<std::array<Gluing, 4>> g(n);
  std::map<std::array<int, 3>, std::pair<int, int>> open;
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key;
      int m = 0;
      for (int a = 0; a < 4; ++a)
        if (a != f) key[m++] = tets[t][a];
      std::sort(key.begin(), key.end());
      if (key[0] == key[1] || key[1] == key[2]) throw TriangulationError("degenerate simplex");
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(key, std::make_pair(t, f));
        continue;
      }
      auto [t2, f2] = it->second;
      if (t2 < 0) throw TriangulationError("face shared by more than two simplices");
      Perm4 p;
      for (int a = 0; a < 4; ++a) {
        if (a == f) {
          p.p[a] = static_cast<std::uint8_t>(f2);
          continue;
        }
        for (int b = 0; b < 4; ++b)
          if (tets[t2][b] == tets[t][a]) p.p[a] = static_cast<std::uint8_t>(b);
      }
      g[t][f] = Gluing{t2, f2, p, ""};
      g[t2][f2] = Gluing{t, f, p.inverse(), ""};
      it->second = {-1, -1};
    }
  }
  for (auto& [key, tf] : open)
    if (tf.first >= 0) g[tf.first][tf.second].mark = mark;
  Triangulation tri(std::move(g));
  if (vertex_of_label) {
    int maxl = -1;
    for (auto& q : tets)
      for (int x : q) maxl = std::max(maxl, x);
    vertex_of_label->assign(maxl + 1, -1);
    for (int t = 0; t < n; ++t)
      for (int a = 0; a < 4; ++a) (*vertex_of_label)[tets[t][a]] = tri.vertex(t, a);
  }
  // a label split over several classes means its link is disconnected
  std::map<int, int> cls;
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a) {
      auto [it, fresh] = cls.emplace(tets[t][a], tri.vertex(t, a));
      if (!fresh && it->second != tri.vertex(t, a))
        throw TriangulationError("vertex " + std::to_string(tets[t][a]) + " has a disconnected link");
    }
  return tri;
}

}  // namespace km
