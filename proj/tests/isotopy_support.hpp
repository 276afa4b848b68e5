#pragma once
// Independent helpers for the curve and surface tests: random disks, grid
// tori and scrambled curves.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "km/isotopy.hpp"

namespace km::support {

using namespace km::iso;

using Tri = std::array<int, 3>;

inline std::set<std::pair<int, int>> cycle_edges(const std::vector<int>& c) {
  std::set<std::pair<int, int>> e;
  for (std::size_t i = 0; i < c.size(); ++i) {
    int a = c[i], b = c[(i + 1) % c.size()];
    e.insert({std::min(a, b), std::max(a, b)});
  }
  return e;
}

// Edges used by exactly one triangle.
inline std::set<std::pair<int, int>> free_edges(const std::vector<Tri>& tris) {
  std::map<std::pair<int, int>, int> n;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      int a = t[i], b = t[(i + 1) % 3];
      ++n[{std::min(a, b), std::max(a, b)}];
    }
  std::set<std::pair<int, int>> out;
  for (auto& [e, c] : n)
    if (c == 1) out.insert(e);
  return out;
}

inline int chi(const std::vector<Tri>& tris) {
  std::set<int> v;
  std::set<std::pair<int, int>> e;
  for (auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      v.insert(t[i]);
      e.insert({std::min(t[i], t[(i + 1) % 3]), std::max(t[i], t[(i + 1) % 3])});
    }
  return static_cast<int>(v.size() - e.size() + tris.size());
}

inline bool same_cycle(std::vector<int> a, std::vector<int> b) {
  if (a.size() != b.size()) return false;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (a == b) return true;
      std::rotate(a.begin(), a.begin() + 1, a.end());
    }
    std::reverse(a.begin(), a.end());
  }
  return false;
}

// Random disk: start from one triangle; attach ears, fill corners, and
// subdivide triangles stellarly.
inline TriangleComplex random_disk(std::mt19937& rng, int target) {
  std::vector<Tri> tris{{0, 1, 2}};
  std::vector<int> bd{0, 1, 2};
  int next = 3;
  auto has_edge = [&](int a, int b) {
    for (auto& t : tris)
      if (std::count(t.begin(), t.end(), a) && std::count(t.begin(), t.end(), b)) return true;
    return false;
  };
  while (static_cast<int>(tris.size()) < target) {
    int op = static_cast<int>(rng() % 3);
    const int n = static_cast<int>(bd.size());
    if (op == 0 || target - static_cast<int>(tris.size()) < 2) {
      int i = static_cast<int>(rng() % n);
      tris.push_back({bd[i], bd[(i + 1) % n], next});
      bd.insert(bd.begin() + i + 1, next++);
    } else if (op == 1) {
      int i = static_cast<int>(rng() % n);
      int a = bd[(i + n - 1) % n], b = bd[i], c = bd[(i + 1) % n];
      if (n <= 3 || has_edge(a, c)) continue;
      tris.push_back({a, b, c});
      bd.erase(bd.begin() + i);
    } else {
      int k = static_cast<int>(rng() % tris.size());
      Tri t = tris[k];
      tris[k] = {t[0], t[1], next};
      tris.push_back({t[1], t[2], next});
      tris.push_back({t[2], t[0], next});
      ++next;
    }
  }
  TriangleComplex s;
  s.points = next;
  s.triangles = tris;
  s.host.assign(tris.size(), 0);
  return s;
}

// Torus from an n x n grid, each square cut along its diagonal.
inline TriSurface grid_torus(int n) {
  std::vector<Tri> t;
  auto v = [n](int i, int j) { return ((i % n + n) % n) * n + (j % n + n) % n; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      t.push_back({v(i, j), v(i + 1, j), v(i + 1, j + 1)});
      t.push_back({v(i, j), v(i + 1, j + 1), v(i, j + 1)});
    }
  return TriSurface::from_triples(t);
}

inline std::vector<int> row_walk(int n, int j) {
  std::vector<int> w;
  for (int i = 0; i < n; ++i) w.push_back(i * n + j);
  return w;
}

inline std::vector<int> column_walk(int n, int i) {
  std::vector<int> w;
  for (int j = 0; j < n; ++j) w.push_back(i * n + j);
  return w;
}

inline SurfaceCurve basic_of(const TriSurface& f, std::vector<int> walk) { return to_basic(f, SurfaceWalk{walk}).curve; }

// Points of both curves on edge e.
inline std::vector<mpq_class> on_edge(int e, const SurfaceCurve& a, const SurfaceCurve& b) {
  std::vector<mpq_class> out;
  for (auto* c : {&a, &b})
    for (auto& p : c->points)
      if (p.edge == e) out.push_back(p.pos);
  return out;
}

// Scrambles beta by random type 1 slides (which may pass alpha) and type 2 moves.
inline SurfaceCurve scramble(const TriSurface& f, const SurfaceCurve& alpha, SurfaceCurve beta, std::mt19937& rng, int steps,
                      int max_total) {
  for (int s = 0; s < steps; ++s) {
    const int i = static_cast<int>(rng() % beta.length());
    try {
      if (rng() % 3) {
        const int e = beta.points[i].edge;
        // new position strictly between neighbours of beta's own points
        mpq_class lo = 0, hi = 1, p = beta.points[i].pos;
        for (auto& q : beta.points)
          if (q.edge == e && q.pos != p) {
            if (q.pos < p && q.pos > lo) lo = q.pos;
            if (q.pos > p && q.pos < hi) hi = q.pos;
          }
        std::vector<mpq_class> taken = on_edge(e, alpha, beta);
        mpq_class x;
        do {
          x = lo + (hi - lo) * mpq_class(static_cast<long>(1 + rng() % 97), 98);
          x.canonicalize();
        } while (std::find(taken.begin(), taken.end(), x) != taken.end());
        beta = apply_basic_move(f, beta, 1, i, 0, x, {&alpha}).curve;
      } else {
        auto r = apply_basic_move(f, beta, 2, i, static_cast<int>(rng() % 2), 0, {&alpha});
        if (alpha.length() + r.curve.length() <= max_total) beta = r.curve;
      }
    } catch (const MoveError&) {
    }
  }
  return beta;
}

}  // namespace km::support
