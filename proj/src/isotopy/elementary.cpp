#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "km/isotopy.hpp"

namespace km::iso {

namespace {

std::array<int, 3> sorted3(int a, int b, int c) {
  std::array<int, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

std::pair<int, int> ekey(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

int position(const CurveState& k, int p) {
  auto it = std::find(k.points.begin(), k.points.end(), p);
  return it == k.points.end() ? -1 : static_cast<int>(it - k.points.begin());
}

int at(const CurveState& k, int i) {
  const int n = static_cast<int>(k.points.size());
  return k.points[((i % n) + n) % n];
}

// Index i with points i, i+1 equal to {a, b} in some order (returns the first), or -1.
int segment_index(const CurveState& k, int a, int b) {
  const int n = static_cast<int>(k.points.size());
  for (int i = 0; i < n; ++i) {
    int x = k.points[i], y = at(k, i + 1);
    if ((x == a && y == b) || (x == b && y == a)) return i;
  }
  return -1;
}

void check_host(const TriangleComplex& s, int a, int b, int c, int host) {
  int t = s.find(a, b, c);
  if (t < 0) throw MoveError("triangle " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                             " is not in the complex");
  if (s.host[t] != host) throw MoveError("triangle is not inside tetrahedron " + std::to_string(host));
}

void check_segment_host(const TriangleComplex& s, int a, int b, int host) {
  for (std::size_t t = 0; t < s.triangles.size(); ++t) {
    auto& x = s.triangles[t];
    if (s.host[t] == host && std::count(x.begin(), x.end(), a) && std::count(x.begin(), x.end(), b)) return;
  }
  throw MoveError("segment is not inside tetrahedron " + std::to_string(host));
}

bool same_cycle(std::vector<int> a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (a == b) return true;
      std::rotate(a.begin(), a.begin() + 1, a.end());
    }
    std::reverse(a.begin(), a.end());
  }
  return false;
}

}  // namespace

int TriangleComplex::find(int a, int b, int c) const {
  auto key = sorted3(a, b, c);
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto x = triangles[t];
    std::sort(x.begin(), x.end());
    if (x == key) return static_cast<int>(t);
  }
  return -1;
}

bool TriangleComplex::has_edge(int a, int b) const {
  for (auto& x : triangles)
    if (std::count(x.begin(), x.end(), a) && std::count(x.begin(), x.end(), b)) return true;
  return false;
}

std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Split: return "1";
    case MoveKind::Merge: return "1'";
    case MoveKind::Slide: return "2";
    case MoveKind::Unslide: return "2'";
  }
  return "?";
}

CurveState initial_state(const TriangleComplex& s, std::vector<int> points) {
  CurveState k;
  std::set<int> seen(points.begin(), points.end());
  if (seen.size() != points.size()) throw MoveError("curve repeats a point");
  for (int p : points)
    if (p < 0 || p >= s.points) throw MoveError("curve point outside the complex");
  k.points = std::move(points);
  k.next_id = s.points;
  return k;
}

void apply_elementary(const TriangleComplex& s, CurveState& k, const ElementaryMove& m) {
  const int n = static_cast<int>(k.points.size());
  auto fresh = [&](int d) {
    if (d < s.points || position(k, d) >= 0 || k.aux.count(d)) throw MoveError("new point id is in use");
  };
  auto on_segment = [&](int d) {
    auto it = k.aux.find(d);
    if (it == k.aux.end() || ekey(it->second[0], it->second[1]) != ekey(m.a, m.b))
      throw MoveError("point " + std::to_string(d) + " does not lie on segment ab");
  };
  switch (m.kind) {
    case MoveKind::Split: {
      int i = segment_index(k, m.a, m.b);
      if (i < 0) throw MoveError("ab is not a segment of the curve");
      fresh(m.d);
      check_segment_host(s, m.a, m.b, m.host);
      k.points.insert(k.points.begin() + i + 1, m.d);
      k.aux[m.d] = {m.a, m.b};
      break;
    }
    case MoveKind::Merge: {
      int j = position(k, m.d);
      if (j < 0 || n < 4) throw MoveError("d is not on the curve");
      int p = at(k, j - 1), q = at(k, j + 1);
      if (ekey(p, q) != ekey(m.a, m.b)) throw MoveError("d is not between a and b");
      on_segment(m.d);
      check_segment_host(s, m.a, m.b, m.host);
      k.points.erase(k.points.begin() + j);
      k.aux.erase(m.d);
      break;
    }
    case MoveKind::Slide: {
      int j = position(k, m.d);
      if (j < 0) throw MoveError("d is not on the curve");
      if (ekey(at(k, j - 1), at(k, j + 1)) != ekey(m.a, m.b)) throw MoveError("d is not between a and b");
      on_segment(m.d);
      check_host(s, m.a, m.b, m.c, m.host);
      // triangle abc may meet the curve only in ab
      if (position(k, m.c) >= 0) throw MoveError("triangle abc meets the curve outside ab");
      for (auto& [p, seg] : k.aux)
        if (p != m.d && (ekey(seg[0], seg[1]) == ekey(m.a, m.c) || ekey(seg[0], seg[1]) == ekey(m.b, m.c)))
          throw MoveError("triangle abc meets the curve outside ab");
      k.points[j] = m.c;
      k.aux.erase(m.d);
      break;
    }
    case MoveKind::Unslide: {
      int j = position(k, m.c);
      if (j < 0) throw MoveError("c is not on the curve");
      if (ekey(at(k, j - 1), at(k, j + 1)) != ekey(m.a, m.b)) throw MoveError("c is not between a and b");
      fresh(m.d);
      check_host(s, m.a, m.b, m.c, m.host);
      // triangle abc may meet the curve only in ac and bc
      if (n == 3 || segment_index(k, m.a, m.b) >= 0) throw MoveError("triangle abc meets the curve along ab");
      for (auto& [p, seg] : k.aux)
        if (ekey(seg[0], seg[1]) == ekey(m.a, m.b)) throw MoveError("triangle abc meets the curve along ab");
      k.points[j] = m.d;
      k.aux[m.d] = {m.a, m.b};
      break;
    }
  }
  k.next_id = std::max(k.next_id, m.d + 1);
}

std::map<std::string, long> MoveScript::counts() const {
  std::map<std::string, long> c;
  for (auto& m : moves) ++c[to_string(m.kind)];
  for (auto& b : basic) ++c["basic" + std::to_string(b.kind)];
  c["total"] = static_cast<long>(moves.size() + basic.size());
  c["elementary"] = elementary_cost();
  return c;
}

long MoveScript::elementary_cost() const {
  long s = static_cast<long>(moves.size());
  for (auto& b : basic) s += b.cost;
  return s;
}

std::string MoveScript::text() const {
  std::ostringstream out;
  for (auto& m : moves)
    out << to_string(m.kind) << ' ' << m.host << ' ' << m.a << ' ' << m.b << ' ' << m.c << ' ' << m.d << '\n';
  for (auto& b : basic)
    out << 'B' << b.kind << ' ' << b.curve << ' ' << b.index << ' ' << b.end << ' ' << b.cost << '\n';
  return out.str();
}

std::string MoveScript::counts_json() const {
  nlohmann::json j = counts();
  return j.dump();
}

CurveState replay(const TriangleComplex& s, const MoveScript& m) {
  CurveState k = m.initial;
  std::size_t next_check = 0;
  auto check = [&](int done) {
    while (next_check < m.checkpoints.size() && m.checkpoints[next_check].first == done) {
      if (k.points != m.checkpoints[next_check].second)
        throw MoveError("checkpoint " + std::to_string(next_check) + " differs on replay");
      ++next_check;
    }
  };
  check(0);
  for (std::size_t i = 0; i < m.moves.size(); ++i) {
    apply_elementary(s, k, m.moves[i]);
    check(static_cast<int>(i + 1));
  }
  if (next_check != m.checkpoints.size()) throw MoveError("checkpoint beyond the script");
  return k;
}

std::vector<std::vector<int>> boundary_cycles(const std::vector<std::array<int, 3>>& tris) {
  std::map<std::pair<int, int>, int> count;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) ++count[ekey(t[i], t[(i + 1) % 3])];
  std::map<int, std::vector<int>> nb;
  for (auto& [e, c] : count) {
    if (c > 2) throw IsotopyError("edge on more than two triangles");
    if (c == 1) {
      nb[e.first].push_back(e.second);
      nb[e.second].push_back(e.first);
    }
  }
  for (auto& [v, l] : nb)
    if (l.size() != 2) throw IsotopyError("boundary is pinched at vertex " + std::to_string(v));
  std::vector<std::vector<int>> out;
  std::set<int> used;
  for (auto& [v0, l0] : nb) {
    if (used.count(v0)) continue;
    std::vector<int> cyc{v0};
    used.insert(v0);
    int prev = v0, cur = std::min(l0[0], l0[1]);
    while (cur != v0) {
      cyc.push_back(cur);
      used.insert(cur);
      auto& l = nb[cur];
      int nxt = l[0] == prev ? l[1] : l[0];
      prev = cur;
      cur = nxt;
    }
    out.push_back(cyc);
  }
  return out;
}

int euler_characteristic(const std::vector<std::array<int, 3>>& tris) {
  std::set<int> v;
  std::set<std::pair<int, int>> e;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      v.insert(t[i]);
      e.insert(ekey(t[i], t[(i + 1) % 3]));
    }
  return static_cast<int>(v.size()) - static_cast<int>(e.size()) + static_cast<int>(tris.size());
}

namespace {

void check_simplicial(const TriangleComplex& s) {
  std::set<std::array<int, 3>> seen;
  for (auto& t : s.triangles) {
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw IsotopyError("degenerate triangle");
    if (!seen.insert(sorted3(t[0], t[1], t[2])).second) throw IsotopyError("two triangles share all vertices");
    for (int v : t)
      if (v < 0 || v >= s.points) throw IsotopyError("triangle vertex out of range");
  }
  if (s.host.size() != s.triangles.size()) throw IsotopyError("host list has the wrong length");
}

bool connected(const std::vector<std::array<int, 3>>& tris) {
  if (tris.empty()) return true;
  std::map<int, int> parent;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto& t : tris)
    for (int v : t) parent.emplace(v, v);
  for (auto& t : tris) {
    parent[find(t[1])] = find(t[0]);
    parent[find(t[2])] = find(t[0]);
  }
  int r = find(tris[0][0]);
  for (auto& [v, p] : parent)
    if (find(v) != r) return false;
  return true;
}

// Removes triangles one at a time, each costing two moves: an ear (two edges on
// the curve) via 2' then 1', or a triangle with one edge on the curve and its
// third vertex off the curve via 1 then 2.
struct Sweeper {
  const TriangleComplex& s;
  MoveScript script;
  CurveState k;
  std::vector<char> alive;
  std::vector<int> order;

  Sweeper(const TriangleComplex& s_, std::vector<int> start) : s(s_), alive(s_.triangles.size(), 1) {
    k = initial_state(s, std::move(start));
    script.initial = k;
    script.checkpoints.push_back({0, k.points});
  }

  void push(const ElementaryMove& m) {
    apply_elementary(s, k, m);
    script.moves.push_back(m);
  }

  bool step(bool ear_first) {
    const int n = static_cast<int>(k.points.size());
    for (int pass = 0; pass < 2; ++pass) {
      bool ears = (pass == 0) == ear_first;
      for (std::size_t t = 0; t < s.triangles.size(); ++t) {
        if (!alive[t]) continue;
        auto& tri = s.triangles[t];
        for (int i = 0; i < n; ++i) {
          int a = k.points[i], b = at(k, i + 1);
          if (!std::count(tri.begin(), tri.end(), a) || !std::count(tri.begin(), tri.end(), b)) continue;
          int c = tri[0] + tri[1] + tri[2] - a - b;
          int pc = position(k, c);
          if (ears) {
            // a, b, c consecutive with b in the middle
            if (at(k, i + 2) != c || n <= 3) continue;
            int d = k.next_id;
            push({MoveKind::Unslide, s.host[t], a, c, b, d});
            push({MoveKind::Merge, s.host[t], a, c, -1, d});
          } else {
            if (pc >= 0) continue;
            int d = k.next_id;
            push({MoveKind::Split, s.host[t], a, b, -1, d});
            push({MoveKind::Slide, s.host[t], a, b, c, d});
          }
          alive[t] = 0;
          order.push_back(static_cast<int>(t));
          script.checkpoints.push_back({static_cast<int>(script.moves.size()), k.points});
          return true;
        }
      }
    }
    return false;
  }
};

}  // namespace

DiskContraction contract_disk(const TriangleComplex& disk) {
  check_simplicial(disk);
  if (disk.triangles.empty()) throw IsotopyError("empty disk");
  if (euler_characteristic(disk.triangles) != 1 || !connected(disk.triangles))
    throw IsotopyError("input is not a disk");
  auto cyc = boundary_cycles(disk.triangles);
  if (cyc.size() != 1) throw IsotopyError("input is not a disk");
  Sweeper sw(disk, cyc[0]);
  const int w = static_cast<int>(disk.triangles.size());
  for (int i = 1; i < w; ++i) {
    // the curve bounds the remaining triangles; ears never strand a vertex
    if (!sw.step(true)) throw IsotopyError("no removable triangle");
  }
  for (std::size_t t = 0; t < disk.triangles.size(); ++t)
    if (sw.alive[t]) sw.order.push_back(static_cast<int>(t));
  return {std::move(sw.script), std::move(sw.order)};
}

TriangleComplex surface_complex(const ReconstructedSurface& s) {
  TriangleComplex c;
  c.points = s.vertices;
  c.triangles = s.triangles;
  for (int p : s.triangle_piece) c.host.push_back(s.pieces[p].tet);
  return c;
}

DiskContraction contract_disk(const ReconstructedSurface& s) {
  if (s.components != 1 || s.euler_characteristic != 1 || s.boundary_curves.size() != 1)
    throw IsotopyError("surface is not a disk");
  return contract_disk(surface_complex(s));
}

MoveScript pull_across_annulus(const TriangleComplex& annulus, const std::vector<int>& from) {
  check_simplicial(annulus);
  if (euler_characteristic(annulus.triangles) != 0 || !connected(annulus.triangles))
    throw IsotopyError("input is not an annulus");
  auto cyc = boundary_cycles(annulus.triangles);
  if (cyc.size() != 2) throw IsotopyError("input is not an annulus");
  std::set<int> on_boundary;
  for (auto& c : cyc) on_boundary.insert(c.begin(), c.end());
  for (auto& t : annulus.triangles)
    for (int v : t)
      if (!on_boundary.count(v)) throw IsotopyError("annulus has an interior vertex");
  int src = same_cycle(cyc[0], from) ? 0 : same_cycle(cyc[1], from) ? 1 : -1;
  if (src < 0) throw IsotopyError("curve is not a boundary component of the annulus");
  Sweeper sw(annulus, from);
  for (std::size_t i = 0; i < annulus.triangles.size(); ++i)
    if (!sw.step(true)) throw IsotopyError("annulus sweep is stuck");
  if (!same_cycle(sw.k.points, cyc[1 - src]) || !sw.k.aux.empty())
    throw IsotopyError("sweep did not reach the other boundary component");
  return std::move(sw.script);
}

}  // namespace km::iso
