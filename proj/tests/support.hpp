#pragma once
// Shared by the unit tests and the acceptance binary: fixture loading, random
// gluing tables, and brute-force oracles that do not share code with the
// library's enumeration.

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "km/complex.hpp"
#include "km/normalsurf.hpp"

namespace km::support {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Triangulation fixture(const std::string& name) {
  return read_triangulation(read_file(std::string(KM_DATA_DIR) + "/" + name));
}

// Random manifold: a tree of tetrahedra (a ball) plus extra face pairings kept
// only while every vertex link stays a sphere or disk.
inline Triangulation random_gluing(std::mt19937& rng, int t, int extra) {
  while (true) {
    std::vector<std::array<Gluing, 4>> g(t);
    for (auto& row : g)
      for (auto& x : row) x.mark = "outer";
    auto glue = [&](int a, int fa, int b, int fb, const Perm4& p) {
      g[a][fa] = Gluing{b, fb, p, ""};
      g[b][fb] = Gluing{a, fa, p.inverse(), ""};
    };
    auto random_perm = [&](int fa, int fb) {
      // a bijection of {0..3} sending fa to fb
      while (true) {
        Perm4 p = Perm4::from_index(static_cast<int>(rng() % 24));
        if (p[fa] == fb) return p;
      }
    };
    for (int k = 1; k < t; ++k) {
      std::vector<std::pair<int, int>> free_faces;
      for (int a = 0; a < k; ++a)
        for (int f = 0; f < 4; ++f)
          if (g[a][f].boundary()) free_faces.push_back({a, f});
      auto [a, fa] = free_faces[rng() % free_faces.size()];
      int fb = static_cast<int>(rng() % 4);
      glue(a, fa, k, fb, random_perm(fa, fb));
    }
    Triangulation tri(g);
    for (int tries = 0; tries < 40 && extra > 0; ++tries) {
      std::vector<std::pair<int, int>> free_faces;
      for (int a = 0; a < t; ++a)
        for (int f = 0; f < 4; ++f)
          if (g[a][f].boundary()) free_faces.push_back({a, f});
      if (free_faces.size() < 2) break;
      auto x = free_faces[rng() % free_faces.size()];
      auto y = free_faces[rng() % free_faces.size()];
      if (x == y) continue;
      auto saved = g;
      glue(x.first, x.second, y.first, y.second, random_perm(x.second, y.second));
      try {
        Triangulation cand(g);
        cand.check_manifold();
        tri = cand;
        --extra;
      } catch (const std::exception&) {
        g = saved;
      }
    }
    try {
      tri.check_manifold();
      return tri;
    } catch (const std::exception&) {
    }
  }
}

// Extreme rays by support enumeration: an admissible support S carries an
// extreme ray iff the matching matrix restricted to S has a one-dimensional
// kernel spanned by a vector positive on all of S.
inline std::vector<NormalVector> support_oracle(const Triangulation& t) {
  const int nt = t.size(), n = 7 * nt;
  std::vector<std::vector<long>> rows;
  for (int f = 0; f < t.faces(); ++f) {
    if (t.face_is_boundary(f)) continue;
    auto [t0, f0] = t.face_rep(f);
    const Gluing& g = t.gluing(t0, f0);
    for (int a = 0; a < 4; ++a) {
      if (a == f0) continue;
      std::vector<long> r(n, 0);
      // arcs around a in this face: triangles at a and the quad pairing a with f0
      auto quad = [](int x, int y) {
        int partner_of_0 = x == 0 ? y : y == 0 ? x : 6 - x - y;
        return 3 + partner_of_0;
      };
      r[7 * t0 + a] += 1;
      r[7 * t0 + quad(a, f0)] += 1;
      r[7 * g.tet + g.perm[a]] -= 1;
      r[7 * g.tet + quad(g.perm[a], g.face)] -= 1;
      rows.push_back(r);
    }
  }
  std::set<std::vector<long>> out;
  std::vector<int> sel(nt, 0);  // per tet: 4 triangle bits + quad choice (0 none, 1..3)
  const int per = 16 * 4;
  long total = 1;
  for (int k = 0; k < nt; ++k) total *= per;
  for (long code = 1; code < total; ++code) {
    std::vector<int> cols;
    long c = code;
    for (int k = 0; k < nt; ++k) {
      int s = static_cast<int>(c % per);
      c /= per;
      for (int a = 0; a < 4; ++a)
        if (s & (1 << a)) cols.push_back(7 * k + a);
      if (s >> 4) cols.push_back(7 * k + 3 + (s >> 4));
    }
    const int m = static_cast<int>(cols.size());
    // integer row echelon form of rows restricted to cols
    std::vector<std::vector<long>> a;
    for (auto& r : rows) {
      std::vector<long> x(m);
      bool nz = false;
      for (int j = 0; j < m; ++j) nz |= (x[j] = r[cols[j]]) != 0;
      if (nz) a.push_back(x);
    }
    std::vector<int> pivcol;
    int rank = 0;
    for (int j = 0; j < m && rank < static_cast<int>(a.size()); ++j) {
      int p = -1;
      for (int i = rank; i < static_cast<int>(a.size()); ++i)
        if (a[i][j] != 0) {
          p = i;
          break;
        }
      if (p < 0) continue;
      std::swap(a[rank], a[p]);
      for (int i = 0; i < static_cast<int>(a.size()); ++i) {
        if (i == rank || a[i][j] == 0) continue;
        long u = a[rank][j], v = a[i][j];
        long g = 0;
        for (int q = 0; q < m; ++q) {
          a[i][q] = u * a[i][q] - v * a[rank][q];
          g = std::gcd(g, std::abs(a[i][q]));
        }
        if (g > 1)
          for (auto& q : a[i]) q /= g;
      }
      pivcol.push_back(j);
      ++rank;
    }
    if (m - rank != 1) continue;
    int free_col = 0;
    while (std::count(pivcol.begin(), pivcol.end(), free_col)) ++free_col;
    long l = 1;
    for (int i = 0; i < rank; ++i) l = std::lcm(l, std::abs(a[i][pivcol[i]]));
    std::vector<long> x(m, 0);
    x[free_col] = l;
    for (int i = 0; i < rank; ++i) x[pivcol[i]] = -a[i][free_col] * (l / a[i][pivcol[i]]);
    long g = 0;
    for (long v : x) g = std::gcd(g, std::abs(v));
    bool pos = true, neg = true;
    for (long& v : x) {
      v /= g;
      pos &= v > 0;
      neg &= v < 0;
    }
    if (!pos && !neg) continue;
    std::vector<long> full(n, 0);
    for (int j = 0; j < m; ++j) full[cols[j]] = neg ? -x[j] : x[j];
    out.insert(full);
  }
  std::vector<NormalVector> res;
  for (auto& v : out) {
    NormalVector x = NormalVector::zero(nt);
    for (int i = 0; i < n; ++i) x.v[i] = v[i];
    res.push_back(x);
  }
  std::sort(res.begin(), res.end());
  return res;
}

// Nonzero homology test by pairing with integer cocycles found by brute
// force: c is nontrivial iff some cocycle z (zero on every listed face
// boundary) has z.c != 0.
inline bool pairs_with_some_cocycle(const Triangulation& t, const std::vector<int>& faces, const std::vector<int>& c,
                                    int range = 1) {
  const int ne = t.edges();
  SparseMatrix b = boundary_matrix(t);
  std::vector<int> z(ne, -range);
  while (true) {
    bool cocycle = true;
    for (int f : faces) {
      long s = 0;
      for (auto& [e, v] : b.col[f]) s += static_cast<long>(v) * z[e];
      if (s != 0) {
        cocycle = false;
        break;
      }
    }
    if (cocycle) {
      long p = 0;
      for (int e = 0; e < ne; ++e) p += static_cast<long>(z[e]) * c[e];
      if (p != 0) return true;
    }
    int k = 0;
    while (k < ne && ++z[k] > range) z[k++] = -range;
    if (k == ne) return false;
  }
}

}  // namespace km::support
