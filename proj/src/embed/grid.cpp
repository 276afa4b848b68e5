#include <algorithm>
#include <map>
#include <set>

#include "km/embed.hpp"

namespace km {

namespace {

using I64 = std::int64_t;
using XY = std::array<I64, 2>;

I64 orient(const XY& a, const XY& b, const XY& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool same_cycle(const Tri& a, const Tri& b) {
  for (int s = 0; s < 3; ++s)
    if (a[0] == b[s] && a[1] == b[(s + 1) % 3] && a[2] == b[(s + 2) % 3]) return true;
  return false;
}

int sgn64(I64 v) { return (v > 0) - (v < 0); }

bool on_segment(const XY& a, const XY& b, const XY& p) {
  return orient(a, b, p) == 0 && std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

// Closed segments ab and cd meet somewhere other than a shared endpoint.
bool segments_clash(const XY& a, const XY& b, const XY& c, const XY& d, bool share) {
  if (share) {
    // sharing one endpoint: only a collinear overlap is a clash
    XY s = (a == c || a == d) ? a : b;
    XY p = s == a ? b : a, q = s == c ? d : c;
    if (orient(s, p, q) != 0) return false;
    return (p[0] - s[0]) * (q[0] - s[0]) + (p[1] - s[1]) * (q[1] - s[1]) > 0;
  }
  int o1 = sgn64(orient(a, b, c)), o2 = sgn64(orient(a, b, d));
  int o3 = sgn64(orient(c, d, a)), o4 = sgn64(orient(c, d, b));
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b);
}

}  // namespace

GridEmbedding grid_embed(const std::vector<Tri>& tris, int nv, const std::array<int, 3>& outer) {
  check_sphere(tris, nv);
  std::map<std::pair<int, int>, int> third;  // (u, v) -> w: w follows v counterclockwise around u
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) third[{t[i], t[(i + 1) % 3]}] = t[(i + 2) % 3];
  const int a1 = outer[0], a2 = outer[1], a3 = outer[2];
  if (!third.count({a3, a2}) || third.at({a3, a2}) != a1) throw EmbedError("outer triangle is not a face");
  std::vector<std::vector<int>> adj(nv);
  for (auto& [e, w] : third) adj[e.first].push_back(e.second);

  // canonical order by peeling chord-free contour vertices, lowest id first
  std::vector<char> removed(nv, 0);
  std::vector<int> contour{a1, a3, a2};  // from a1 to a2, interior on the right
  std::vector<int> parent1(nv, -1), parent2(nv, -1), parent3(nv, -1);
  auto peel = [&](int i) {
    int v = contour[i], left = contour[i - 1], right = contour[i + 1];
    std::vector<int> inner;
    for (int u = third.at({v, left}); u != right; u = third.at({v, u})) inner.push_back(u);
    removed[v] = 1;
    parent1[v] = left;
    parent2[v] = right;
    for (int u : inner) parent3[u] = v;
    contour.erase(contour.begin() + i);
    contour.insert(contour.begin() + i, inner.begin(), inner.end());
  };
  peel(1);
  for (int k = nv - 1; k > 2; --k) {
    std::vector<int> pos(nv, -1);
    for (int i = 0; i < static_cast<int>(contour.size()); ++i) pos[contour[i]] = i;
    int best = -1;
    for (int i = 1; i + 1 < static_cast<int>(contour.size()); ++i) {
      int v = contour[i];
      bool chord = false;
      for (int u : adj[v])
        if (!removed[u] && pos[u] >= 0 && std::abs(pos[u] - i) > 1) chord = true;
      if (!chord && (best < 0 || v < contour[best])) best = i;
    }
    if (best < 0) throw EmbedError("no canonical ordering");
    peel(best);
  }
  if (contour.size() != 2) throw EmbedError("canonical ordering left extra vertices");

  // vertex-counting coordinates from the three trees
  std::vector<Tri> inner_faces;
  std::map<std::pair<int, int>, int> face_of;
  for (auto& t : tris) {
    if (same_cycle(t, {a3, a2, a1})) continue;
    int id = static_cast<int>(inner_faces.size());
    inner_faces.push_back(t);
    for (int i = 0; i < 3; ++i) face_of[{t[i], t[(i + 1) % 3]}] = id;
  }
  const std::vector<int>* parents[3] = {&parent1, &parent2, &parent3};
  const int roots[3] = {a1, a2, a3};
  const int f_ = static_cast<int>(inner_faces.size());
  GridEmbedding e;
  e.xy.assign(nv, {0, 0});
  const I64 top = nv - 2;
  e.xy[a1] = {top, 1};
  e.xy[a2] = {0, top};
  e.xy[a3] = {1, 0};
  for (int v = 0; v < nv; ++v) {
    if (v == a1 || v == a2 || v == a3) continue;
    std::vector<int> path[3];
    std::set<std::pair<int, int>> barrier;
    for (int i = 0; i < 3; ++i) {
      int u = v;
      path[i].push_back(u);
      while (u != roots[i]) {
        int p = (*parents[i])[u];
        if (p < 0) throw EmbedError("broken tree");
        barrier.insert({std::min(u, p), std::max(u, p)});
        u = p;
        path[i].push_back(u);
        if (static_cast<int>(path[i].size()) > nv) throw EmbedError("tree has a cycle");
      }
    }
    I64 r[3];
    for (int i = 0; i < 3; ++i) {
      // region opposite a_i: flood from the face on the outer edge a_{i+1} a_{i+2}
      int s = face_of.at({roots[(i + 1) % 3], roots[(i + 2) % 3]});
      std::vector<char> seen(f_, 0);
      std::vector<int> stack{s};
      seen[s] = 1;
      std::set<int> verts;
      while (!stack.empty()) {
        int f = stack.back();
        stack.pop_back();
        const Tri& t = inner_faces[f];
        for (int j = 0; j < 3; ++j) {
          int x = t[j], y = t[(j + 1) % 3];
          verts.insert(x);
          if (barrier.count({std::min(x, y), std::max(x, y)})) continue;
          auto it = face_of.find({y, x});
          if (it == face_of.end() || seen[it->second]) continue;
          seen[it->second] = 1;
          stack.push_back(it->second);
        }
      }
      r[i] = static_cast<I64>(verts.size()) - static_cast<I64>(path[(i + 2) % 3].size());
    }
    if (r[0] + r[1] + r[2] != nv - 1) throw EmbedError("vertex counts do not sum to V-1");
    e.xy[v] = {r[0], r[1]};
  }
  e.side = top;
  return e;
}

GridEmbedding grid_embed(const AugmentedGraph& g) { return grid_embed(g.triangles, g.vertices(), g.frame); }

bool is_planar_drawing(const std::vector<Tri>& tris, const std::array<int, 3>& outer, const GridEmbedding& e,
                       std::string* why) {
  auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  const Tri out_face{outer[2], outer[1], outer[0]};
  I64 area = 0;
  for (auto& t : tris) {
    if (same_cycle(t, out_face)) continue;
    I64 o = orient(e.xy[t[0]], e.xy[t[1]], e.xy[t[2]]);
    if (o <= 0) return fail("face not counterclockwise");
    area += o;
  }
  if (area != orient(e.xy[outer[0]], e.xy[outer[1]], e.xy[outer[2]])) return fail("face areas do not add up");
  std::set<std::pair<int, int>> es;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) es.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
  std::vector<std::pair<int, int>> ev(es.begin(), es.end());
  for (size_t i = 0; i < ev.size(); ++i)
    for (size_t j = i + 1; j < ev.size(); ++j) {
      auto [a, b] = ev[i];
      auto [c, d] = ev[j];
      bool share = a == c || a == d || b == c || b == d;
      if (segments_clash(e.xy[a], e.xy[b], e.xy[c], e.xy[d], share))
        return fail("edges " + std::to_string(a) + "-" + std::to_string(b) + " and " + std::to_string(c) + "-" +
                    std::to_string(d) + " meet");
    }
  return true;
}

}  // namespace km
