#include <algorithm>
#include <deque>
#include <set>

#include "km/isotopy.hpp"

namespace km::iso {

namespace {

struct PeripheralFace {
  std::array<int, 3> v;
  int apex = -1;  // core vertex of the tetrahedron of R carrying the face
  int tet = -1;
};

std::vector<PeripheralFace> peripheral_faces(const Triangulation& t, const SolidTorusNbhd& r) {
  std::vector<PeripheralFace> out;
  for (auto [tet, f] : r.peripheral) {
    PeripheralFace p;
    int j = 0;
    for (int a = 0; a < 4; ++a)
      if (a != f) p.v[j++] = t.vertex(tet, a);
    p.apex = t.vertex(tet, f);
    p.tet = tet;
    out.push_back(p);
  }
  return out;
}

std::map<int, std::set<int>> adjacency(const std::vector<PeripheralFace>& faces) {
  std::map<int, std::set<int>> nb;
  for (auto& p : faces)
    for (int i = 0; i < 3; ++i) {
      nb[p.v[i]].insert(p.v[(i + 1) % 3]);
      nb[p.v[(i + 1) % 3]].insert(p.v[i]);
    }
  return nb;
}

// Orders the edges {a, b} of a single cycle: starts at the lowest vertex, towards its lower neighbour.
std::vector<int> order_cycle(const std::vector<std::pair<int, int>>& edges) {
  std::map<int, std::vector<int>> nb;
  for (auto [a, b] : edges) {
    nb[a].push_back(b);
    nb[b].push_back(a);
  }
  for (auto& [v, l] : nb)
    if (l.size() != 2) throw IsotopyError("edge link is not a circle");
  int v0 = nb.begin()->first;
  std::vector<int> cyc{v0};
  int prev = v0, cur = std::min(nb[v0][0], nb[v0][1]);
  while (cur != v0) {
    cyc.push_back(cur);
    int nxt = nb[cur][0] == prev ? nb[cur][1] : nb[cur][0];
    prev = cur;
    cur = nxt;
  }
  if (cyc.size() != nb.size()) throw IsotopyError("edge link is not connected");
  return cyc;
}

// Tetrahedron containing the three vertex classes, preferring those of R.
int host_of(const Triangulation& t, const std::vector<int>& prefer, int a, int b, int c) {
  auto has = [&](int tet) {
    int n = 0;
    for (int x : {a, b, c})
      for (int i = 0; i < 4; ++i)
        if (t.vertex(tet, i) == x) {
          ++n;
          break;
        }
    return n == 3;
  };
  for (int tet : prefer)
    if (has(tet)) return tet;
  for (int tet = 0; tet < t.size(); ++tet)
    if (has(tet)) return tet;
  throw IsotopyError("no tetrahedron contains triangle " + std::to_string(a) + "," + std::to_string(b) + "," +
                     std::to_string(c));
}

}  // namespace

std::vector<PLCurve> meridians(const Triangulation& t, const SolidTorusNbhd& r) {
  const int s = static_cast<int>(r.core.size());
  std::vector<PLCurve> out;
  for (int i = 1; i <= s; ++i) {
    int u = r.core[i - 1], w = r.core[i % s];
    std::vector<std::pair<int, int>> link;
    for (int tet : r.tets) {
      std::vector<int> rest;
      bool hu = false, hw = false;
      for (int a = 0; a < 4; ++a) {
        int x = t.vertex(tet, a);
        if (x == u) hu = true;
        else if (x == w) hw = true;
        else rest.push_back(x);
      }
      if (hu && hw && rest.size() == 2) link.push_back({rest[0], rest[1]});
    }
    out.push_back(PLCurve{order_cycle(link)});
  }
  return out;
}

ParallelCurve parallel_curve(const Triangulation& t, const SolidTorusNbhd& r) {
  const int s = static_cast<int>(r.core.size());
  if (s % 4) throw IsotopyError("core length is not a multiple of 4");
  auto mu = meridians(t, r);
  auto faces = peripheral_faces(t, r);
  auto nb = adjacency(faces);
  std::vector<int> on_meridian(t.vertices(), -1);
  // distinct meridians sit around the odd core vertices: M_i = mu_i = mu_{i+1}, i odd
  for (int i = 1; i < s; i += 2)
    for (int v : mu[i - 1].vertices) {
      if (on_meridian[v] >= 0) throw IsotopyError("meridians meet");
      on_meridian[v] = i;
    }

  // alpha_i: breadth-first from M_i to M_{i+2} through vertices on no meridian
  std::vector<std::vector<int>> paths;
  for (int i = 1; i < s; i += 2) {
    int target = (i + 2 - 1) % s + 1;
    std::map<int, int> parent;
    std::deque<int> q;
    auto src = mu[i - 1].vertices;
    std::sort(src.begin(), src.end());
    for (int v : src) {
      parent[v] = -1;
      q.push_back(v);
    }
    int found = -1;
    while (!q.empty() && found < 0) {
      int v = q.front();
      q.pop_front();
      for (int w : nb[v]) {
        if (parent.count(w)) continue;
        if (on_meridian[w] == target) {
          parent[w] = v;
          found = w;
          break;
        }
        if (on_meridian[w] >= 0) continue;
        parent[w] = v;
        q.push_back(w);
      }
    }
    if (found < 0) throw IsotopyError("no path between consecutive meridians");
    std::vector<int> path;
    for (int v = found; v >= 0; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    paths.push_back(path);
  }

  // beta on M_i from the end of alpha_{i-2} to the start of alpha_i, the shorter way round
  auto beta = [&](int i, int from, int to) {
    auto& c = mu[i - 1].vertices;
    const int n = static_cast<int>(c.size());
    int a = static_cast<int>(std::find(c.begin(), c.end(), from) - c.begin());
    int b = static_cast<int>(std::find(c.begin(), c.end(), to) - c.begin());
    int fwd = ((b - a) % n + n) % n, bwd = n - fwd;
    std::vector<int> out;
    if (fwd <= bwd)
      for (int j = 0; j <= fwd; ++j) out.push_back(c[(a + j) % n]);
    else
      for (int j = 0; j <= bwd; ++j) out.push_back(c[((a - j) % n + n) % n]);
    return out;
  };

  ParallelCurve p;
  p.annulus.points = t.vertices();
  auto add = [&](int a, int b, int c) {
    p.annulus.triangles.push_back({a, b, c});
    p.annulus.host.push_back(host_of(t, r.tets, a, b, c));
  };
  const int m = s / 2;
  std::vector<int> alpha;
  for (int j = 0; j < m; ++j) {
    int i = 2 * j + 1;
    auto& prev = paths[(j + m - 1) % m];
    auto& cur = paths[j];
    auto b = beta(i, prev.back(), cur.front());
    const int wi = r.core[i % s], wnext = r.core[(i + 1) % s];
    // fan around w_i: cone of beta_i, then the triangle into the alpha_i strip
    for (std::size_t q = 0; q + 1 < b.size(); ++q) add(b[q], b[q + 1], wi);
    add(cur.front(), wi, wnext);
    for (std::size_t q = 0; q + 1 < cur.size(); ++q) add(cur[q], cur[q + 1], wnext);
    add(cur.back(), wnext, r.core[(i + 2) % s]);
    if (j == 0) p.first_edge = static_cast<int>(b.size()) - 1;
    alpha.insert(alpha.end(), b.begin(), b.end() - 1);
    alpha.insert(alpha.end(), cur.begin(), cur.end() - 1);
  }
  p.alpha.vertices = alpha;
  return p;
}

// ---------------------------------------------------------------------------

namespace {

int rank_and_basis(std::vector<std::vector<mpz_class>> a, int cols, std::vector<int>* pivot_cols,
                   std::vector<int>* pivot_rows) {
  // fraction-free elimination tracking the original row order
  const int rows = static_cast<int>(a.size());
  std::vector<int> idx(rows);
  for (int i = 0; i < rows; ++i) idx[i] = i;
  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    std::swap(idx[r], idx[piv]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    if (pivot_cols) pivot_cols->push_back(c);
    if (pivot_rows) pivot_rows->push_back(idx[r]);
    ++r;
  }
  return r;
}

mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
  const int n = static_cast<int>(a.size());
  mpz_class prev = 1;
  int sign = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(a[c], a[piv]);
      sign = -sign;
    }
    for (int i = c + 1; i < n; ++i) {
      for (int j = c + 1; j < n; ++j) {
        a[i][j] = a[c][c] * a[i][j] - a[i][c] * a[c][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[c][c];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

TwistSolve twist_count(const Triangulation& m, const std::vector<int>& alpha, const std::vector<int>& mu) {
  const int ne = m.edges(), nf = m.faces(), nt = m.size();
  if (static_cast<int>(alpha.size()) != ne || static_cast<int>(mu.size()) != ne)
    throw IsotopyError("cycle vector has the wrong length");
  SparseMatrix b = boundary_matrix(m);
  const int cmu = nf, calpha = nf + 1;
  std::vector<std::map<int, int>> rows(ne);
  std::vector<std::set<int>> in_col(nf);
  for (int f = 0; f < nf; ++f)
    for (auto& [e, v] : b.col[f]) {
      if (v == 0) continue;
      rows[e][f] = v;
      in_col[f].insert(e);
    }
  std::vector<mpz_class> rhs_mu(mu.begin(), mu.end()), rhs_alpha(alpha.begin(), alpha.end());
  std::vector<char> col_alive(nf, 1);
  auto drop_col = [&](int f) {
    for (int e : in_col[f]) rows[e].erase(f);
    in_col[f].clear();
    col_alive[f] = 0;
  };

  // Tetrahedra collapse through free faces: adding multiples of a tetrahedron
  // boundary clears the free face's coefficient, so the column can go.
  std::vector<std::vector<int>> face_tets(nf);
  for (int t = 0; t < nt; ++t)
    for (int i = 0; i < 4; ++i) face_tets[m.face(t, i)].push_back(t);
  std::vector<char> tet_alive(nt, 1);
  std::vector<int> live_tets(nf);
  for (int f = 0; f < nf; ++f) live_tets[f] = static_cast<int>(face_tets[f].size());
  std::vector<int> queue;
  for (int f = 0; f < nf; ++f)
    if (live_tets[f] == 1) queue.push_back(f);
  if (queue.empty() && nt > 0) {
    // closed: puncture one tetrahedron
    tet_alive[0] = 0;
    for (int i = 0; i < 4; ++i)
      if (--live_tets[m.face(0, i)] == 1) queue.push_back(m.face(0, i));
  }
  while (!queue.empty()) {
    int f = queue.back();
    queue.pop_back();
    if (!col_alive[f] || live_tets[f] != 1) continue;
    int tet = -1;
    for (int t : face_tets[f])
      if (tet_alive[t]) tet = t;
    tet_alive[tet] = 0;
    drop_col(f);
    for (int i = 0; i < 4; ++i) {
      int g = m.face(tet, i);
      --live_tets[g];
      if (col_alive[g] && live_tets[g] == 1) queue.push_back(g);
    }
  }

  // Faces collapse through free edges: a row with one unit entry fixes that
  // face coefficient, which only moves the right-hand sides.
  std::vector<char> row_alive(ne, 1);
  int unit_pivots = 0;
  std::vector<int> equeue;
  for (int e = 0; e < ne; ++e)
    if (rows[e].size() == 1) equeue.push_back(e);
  while (!equeue.empty()) {
    int e = equeue.back();
    equeue.pop_back();
    if (!row_alive[e] || rows[e].size() != 1) continue;
    auto [f, v] = *rows[e].begin();
    if (v != 1 && v != -1) continue;
    mpz_class ym = rhs_mu[e] * v, ya = rhs_alpha[e] * v;
    for (int e2 : in_col[f]) {
      if (e2 == e) continue;
      int w = rows[e2].at(f);
      rhs_mu[e2] -= w * ym;
      rhs_alpha[e2] -= w * ya;
    }
    std::vector<int> touched(in_col[f].begin(), in_col[f].end());
    drop_col(f);
    row_alive[e] = 0;
    ++unit_pivots;
    for (int e2 : touched)
      if (row_alive[e2] && rows[e2].size() == 1) equeue.push_back(e2);
  }

  // Dense fraction-free solve on what is left.
  std::vector<int> rest_rows, rest_cols;
  for (int e = 0; e < ne; ++e)
    if (row_alive[e] && (!rows[e].empty() || rhs_mu[e] != 0 || rhs_alpha[e] != 0)) rest_rows.push_back(e);
  for (int f = 0; f < nf; ++f)
    if (col_alive[f] && !in_col[f].empty()) rest_cols.push_back(f);
  const int nr = static_cast<int>(rest_rows.size()), nc = static_cast<int>(rest_cols.size());
  auto dense = [&](const std::vector<int>& cols) {
    std::vector<std::vector<mpz_class>> a(nr, std::vector<mpz_class>(cols.size()));
    for (int i = 0; i < nr; ++i) {
      const int e = rest_rows[i];
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] == cmu) a[i][j] = rhs_mu[e];
        else if (cols[j] == calpha) a[i][j] = rhs_alpha[e];
        else if (auto it = rows[e].find(cols[j]); it != rows[e].end()) a[i][j] = it->second;
      }
    }
    return a;
  };
  std::vector<int> pc;
  int fr = rank_and_basis(dense(rest_cols), nc, &pc, nullptr);
  std::vector<int> basis;
  for (int j : pc) basis.push_back(rest_cols[j]);
  auto with_mu = basis;
  with_mu.push_back(cmu);
  std::vector<int> prow;
  std::vector<int> pcol2;
  int r1 = rank_and_basis(dense(with_mu), static_cast<int>(with_mu.size()), &pcol2, &prow);
  if (r1 != fr + 1) throw IsotopyError("meridian class lies in the span of the face boundaries");
  auto with_alpha = with_mu;
  with_alpha.push_back(calpha);
  if (rank_and_basis(dense(with_alpha), static_cast<int>(with_alpha.size()), nullptr, nullptr) != r1)
    throw IsotopyError("no twist makes the curve a boundary");

  // Cramer on f+1 independent rows of [faces | mu]
  auto full = dense(with_alpha);
  std::vector<std::vector<mpz_class>> sq(r1, std::vector<mpz_class>(r1)), num = sq;
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r1; ++j) {
      sq[i][j] = full[prow[i]][j];
      num[i][j] = j == r1 - 1 ? full[prow[i]][r1] : full[prow[i]][j];
    }
  TwistSolve out;
  out.det = bareiss_det(sq);
  mpz_class n = bareiss_det(num);
  if (out.det == 0) throw IsotopyError("singular twist system");
  if (n % out.det != 0) throw IsotopyError("twist count is not an integer");
  // faces . y - k' mu = alpha with y_last = -k
  out.k = -(n / out.det);
  out.faces = unit_pivots + fr;

  // |k| <= (f + 1) 3^{f/2}
  mpz_class p3;
  mpz_ui_pow_ui(p3.get_mpz_t(), 3, out.faces);
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), p3.get_mpz_t());
  if (root * root < p3) ++root;
  out.bound = (out.faces + 1) * root;
  out.within_bound = out.k * out.k <= (out.faces + 1) * (out.faces + 1) * p3;
  if (out.det < 0) out.det = -out.det;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Band {
  std::vector<std::array<int, 2>> radial;  // (vertex on M, outer vertex), r_0 = [x_1, v]
  std::vector<int> face;                   // peripheral face between r_j and r_{j+1}
  std::vector<PeripheralFace> faces;
};

Band band_around(const Triangulation& t, const SolidTorusNbhd& r, const ParallelCurve& p) {
  const int s = static_cast<int>(r.core.size());
  auto mu = meridians(t, r);
  std::set<int> m1(mu[0].vertices.begin(), mu[0].vertices.end());
  const int w2 = r.core[2 % s];
  Band band;
  band.faces = peripheral_faces(t, r);
  std::vector<int> a;
  for (std::size_t i = 0; i < band.faces.size(); ++i) {
    auto& f = band.faces[i];
    if (f.apex != w2) continue;
    int on = 0;
    for (int v : f.v) on += m1.count(v) ? 1 : 0;
    if (on == 3) throw IsotopyError("band triangle lies on the meridian");
    if (on) a.push_back(static_cast<int>(i));
  }
  const auto& al = p.alpha.vertices;
  const int n = static_cast<int>(al.size());
  int x1 = al[p.first_edge], v = al[(p.first_edge + 1) % n];
  if (!m1.count(x1) || m1.count(v)) throw IsotopyError("first edge of alpha is not radial");
  auto radial_of = [&](int fi) {
    std::vector<std::array<int, 2>> out;
    auto& f = band.faces[fi].v;
    for (int i = 0; i < 3; ++i) {
      int x = f[i], y = f[(i + 1) % 3];
      if (m1.count(x) && !m1.count(y)) out.push_back({x, y});
      if (m1.count(y) && !m1.count(x)) out.push_back({y, x});
    }
    if (out.size() != 2) throw IsotopyError("band triangle without two radial edges");
    return out;
  };
  std::array<int, 2> cur{x1, v};
  // first triangle: of the two on [x_1, v], the one with the lower third vertex
  int first = -1, third = -1;
  for (int fi : a) {
    auto& f = band.faces[fi].v;
    if (!std::count(f.begin(), f.end(), x1) || !std::count(f.begin(), f.end(), v)) continue;
    int z = f[0] + f[1] + f[2] - x1 - v;
    if (first < 0 || z < third) {
      first = fi;
      third = z;
    }
  }
  if (first < 0) throw IsotopyError("first edge of alpha is not in the band");
  int fi = first;
  std::set<int> used;
  while (true) {
    band.radial.push_back(cur);
    band.face.push_back(fi);
    used.insert(fi);
    auto rs = radial_of(fi);
    cur = rs[0] == cur ? rs[1] : rs[0];
    if (cur == std::array<int, 2>{x1, v}) break;
    int next = -1;
    for (int g : a) {
      if (g == fi) continue;
      auto gr = radial_of(g);
      if (gr[0] == cur || gr[1] == cur) next = g;
    }
    if (next < 0 || used.count(next)) throw IsotopyError("band around the meridian does not close up");
    fi = next;
  }
  if (used.size() != a.size()) throw IsotopyError("band has stray triangles");
  return band;
}

}  // namespace

std::vector<int> spiral_meridian(const Triangulation& t, const SolidTorusNbhd& r, const ParallelCurve& p) {
  Band band = band_around(t, r, p);
  std::vector<int> out;
  for (auto& rad : band.radial)
    if (out.empty() || out.back() != rad[0]) out.push_back(rad[0]);
  while (out.size() > 1 && out.back() == out.front()) out.pop_back();
  return out;
}

Longitude build_longitude(const Triangulation& t, const SolidTorusNbhd& r, const ParallelCurve& p, long k,
                          long max_points) {
  Longitude out;
  out.k = k;
  out.annulus = p.annulus;
  out.points = p.alpha.vertices;
  if (k == 0) {
    out.ell = static_cast<int>(band_around(t, r, p).radial.size());
    return out;
  }
  Band band = band_around(t, r, p);
  const long ell = static_cast<long>(band.radial.size());
  out.ell = static_cast<int>(ell);
  const long steps = std::labs(k) * ell;
  if (steps - 1 > max_points) throw BudgetExceeded("spiral needs " + std::to_string(steps - 1) + " points");
  const int s = static_cast<int>(r.core.size());
  const int w2 = r.core[2 % s];
  const int nv = t.vertices();
  const int n = static_cast<int>(p.alpha.vertices.size());
  const int x1 = p.alpha.vertices[p.first_edge], v = p.alpha.vertices[(p.first_edge + 1) % n];

  // radial index and band face of step j, winding forwards for k > 0
  auto radial_at = [&](long j) { return k > 0 ? j % ell : (ell - j % ell) % ell; };
  auto face_at = [&](long j) {
    // face between radial(j) and radial(j + 1)
    return k > 0 ? band.face[j % ell] : band.face[((ell - j % ell) % ell + ell - 1) % ell];
  };
  std::vector<int> spiral{x1};
  for (long j = 1; j < steps; ++j) {
    spiral.push_back(nv + static_cast<int>(j - 1));
    out.shadow.push_back(band.radial[radial_at(j)][0]);
  }
  spiral.push_back(v);

  int removed = out.annulus.find(x1, v, w2);
  if (removed < 0) throw IsotopyError("parallel annulus lacks the triangle over the first edge");
  out.removed = removed;
  TriangleComplex a;
  a.points = nv + static_cast<int>(steps - 1);
  for (std::size_t i = 0; i < out.annulus.triangles.size(); ++i) {
    if (static_cast<int>(i) == removed) continue;
    a.triangles.push_back(out.annulus.triangles[i]);
    a.host.push_back(out.annulus.host[i]);
  }
  for (long j = 0; j < steps; ++j) {
    a.triangles.push_back({spiral[j], spiral[j + 1], w2});
    a.host.push_back(band.faces[face_at(j)].tet);
  }
  out.annulus = std::move(a);
  std::vector<int> pts;
  for (int i = 0; i < n; ++i) {
    int idx = (p.first_edge + 1 + i) % n;  // from v round to x_1
    pts.push_back(p.alpha.vertices[idx]);
  }
  // pts ends with x_1; insert the spiral interior after it
  pts.insert(pts.end(), spiral.begin() + 1, spiral.end() - 1);
  out.points = std::move(pts);
  return out;
}

std::vector<int> pushed_walk(const Longitude& l) {
  if (l.shadow.empty()) return l.points;
  const int nv = static_cast<int>(l.annulus.points) - static_cast<int>(l.shadow.size());
  std::vector<int> w;
  for (int p : l.points) {
    int q = p >= nv ? l.shadow[p - nv] : p;
    if (w.empty() || w.back() != q) w.push_back(q);
  }
  while (w.size() > 1 && w.back() == w.front()) w.pop_back();
  return w;
}

}  // namespace km::iso
