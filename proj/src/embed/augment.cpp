#include <algorithm>
#include <map>
#include <set>

#include "km/embed.hpp"

namespace km {

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

std::pair<int, int> key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Triangulates a counterclockwise face cycle (vertices may repeat) without
// creating loops or multiple edges.
void triangulate_face(std::vector<int> w, EdgeSet& edges, std::vector<Tri>& out) {
  while (w.size() > 3) {
    const int k = static_cast<int>(w.size());
    bool cut = false;
    for (int i = 0; i < k && !cut; ++i) {
      int a = w[i], b = w[(i + 1) % k], c = w[(i + 2) % k];
      if (a == c || edges.count(key(a, c))) continue;
      out.push_back({a, b, c});
      edges.insert(key(a, c));
      w.erase(w.begin() + (i + 1) % k);
      cut = true;
    }
    if (cut) continue;
    // no ear: split along any admissible chord
    for (int i = 0; i < k; ++i)
      for (int j = i + 2; j < k; ++j) {
        if (i == 0 && j == k - 1) continue;
        if (w[i] == w[j] || edges.count(key(w[i], w[j]))) continue;
        edges.insert(key(w[i], w[j]));
        std::vector<int> left(w.begin() + i, w.begin() + j + 1);
        std::vector<int> right(w.begin() + j, w.end());
        right.insert(right.end(), w.begin(), w.begin() + i + 1);
        triangulate_face(left, edges, out);
        triangulate_face(right, edges, out);
        return;
      }
    throw EmbedError("face cannot be triangulated simply");
  }
  if (w[0] == w[1] || w[1] == w[2] || w[0] == w[2]) throw EmbedError("degenerate face triangle");
  out.push_back({w[0], w[1], w[2]});
}

// Connected sum of two spheres along face fa of x and face fb of y.
std::vector<Tri> connect(std::vector<Tri> x, int fa, const std::vector<Tri>& y, int fb) {
  Tri a = x[fa], b = y[fb];
  x.erase(x.begin() + fa);
  for (int i = 0; i < static_cast<int>(y.size()); ++i)
    if (i != fb) x.push_back(y[i]);
  Tri c{b[0], b[2], b[1]};
  for (int i = 0; i < 3; ++i) {
    int j = (i + 1) % 3;
    x.push_back({a[i], a[j], c[i]});
    x.push_back({c[j], c[i], a[j]});
  }
  return x;
}

}  // namespace

std::vector<std::array<int, 2>> AugmentedGraph::edges() const {
  std::set<std::pair<int, int>> s;
  for (auto& t : triangles)
    for (int i = 0; i < 3; ++i) s.insert(key(t[i], t[(i + 1) % 3]));
  std::vector<std::array<int, 2>> out;
  for (auto& [a, b] : s) out.push_back({a, b});
  return out;
}

void check_sphere(const std::vector<Tri>& tris, int vertices) {
  std::map<std::pair<int, int>, int> third;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      int a = t[i], b = t[(i + 1) % 3], c = t[(i + 2) % 3];
      if (a == b || a < 0 || a >= vertices) throw EmbedError("bad triangle");
      if (!third.emplace(std::make_pair(a, b), c).second) throw EmbedError("directed edge used twice");
    }
  for (auto& [e, c] : third)
    if (!third.count({e.second, e.first})) throw EmbedError("edge without a partner");
  // each vertex: its neighbours form one rotation cycle
  std::vector<std::vector<int>> nbrs(vertices);
  for (auto& [e, c] : third) nbrs[e.first].push_back(e.second);
  for (int v = 0; v < vertices; ++v) {
    if (nbrs[v].empty()) throw EmbedError("isolated vertex");
    int start = nbrs[v][0], u = start, steps = 0;
    do {
      u = third.at({v, u});
      ++steps;
    } while (u != start && steps <= static_cast<int>(nbrs[v].size()));
    if (steps != static_cast<int>(nbrs[v].size())) throw EmbedError("vertex link is not a single cycle");
  }
  const long e = static_cast<long>(third.size()) / 2;
  if (vertices - e + static_cast<long>(tris.size()) != 2) throw EmbedError("not a sphere");
  // connectivity
  std::vector<char> seen(vertices, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++count;
    for (int u : nbrs[v])
      if (!seen[u]) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  if (count != vertices) throw EmbedError("graph is disconnected");
}

AugmentedGraph augment(const Diagram& d) {
  AugmentedGraph g;
  g.base = d;
  g.crossings = d.crossings();
  const int nd = d.darts();
  int next = g.crossings;
  g.near.assign(nd, -1);
  for (int x = 0; x < nd; ++x) {
    if (g.near[x] >= 0) continue;
    g.near[x] = next++;
    g.near[d.mate(x)] = next++;
  }
  for (int i = 0; i < d.loops(); ++i) {
    g.loop_triangles.push_back({next, next + 1, next + 2});
    next += 3;
  }
  g.m = next;
  EdgeSet edges;
  for (int x = 0; x < nd; ++x) {
    g.graph_edges.push_back({dart_crossing(x), g.near[x]});
    if (x < d.mate(x)) g.graph_edges.push_back({g.near[x], g.near[d.mate(x)]});
  }
  for (auto& t : g.loop_triangles)
    for (int i = 0; i < 3; ++i) g.graph_edges.push_back({t[i], t[(i + 1) % 3]});
  for (auto& e : g.graph_edges) edges.insert(key(e[0], e[1]));

  // one sphere per connected piece of G
  std::vector<std::vector<Tri>> spheres;
  std::map<int, int> comp_of;
  auto comps = d.graph_components();
  for (int c = 0; c < static_cast<int>(comps.size()); ++c)
    for (int x : comps[c]) comp_of[x] = c;
  spheres.resize(comps.size());
  for (auto& f : d.faces()) {
    std::vector<int> w;
    for (int x : f) {
      w.push_back(dart_crossing(x));
      w.push_back(g.near[x]);
      w.push_back(g.near[d.mate(x)]);
    }
    triangulate_face(w, edges, spheres[comp_of[dart_crossing(f[0])]]);
  }
  for (auto& t : g.loop_triangles) spheres.push_back({{t[0], t[1], t[2]}, {t[2], t[1], t[0]}});

  std::vector<Tri> all = spheres[0];
  for (size_t i = 1; i < spheres.size(); ++i) all = connect(all, 0, spheres[i], 0);
  const int f0 = g.m, f1 = g.m + 1, f2 = g.m + 2;
  std::vector<Tri> frame{{f0, f1, f2}, {f2, f1, f0}};
  g.triangles = connect(all, 0, frame, 0);
  g.frame = {f0, f1, f2};
  check_sphere(g.triangles, g.vertices());
  return g;
}

}  // namespace km
