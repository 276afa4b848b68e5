#include <gmpxx.h>

#include <algorithm>
#include <map>

#include "km/complex.hpp"

namespace km {

namespace {

void add_entry(std::map<int, int>& m, int row, int v) {
  if ((m[row] += v) == 0) m.erase(row);
}

std::vector<std::pair<int, int>> flatten(const std::map<int, int>& m) { return {m.begin(), m.end()}; }

// Orientation of face (t, k) relative to its class representative.
int face_orientation(const Triangulation& t, int tet, int k) {
  auto [rt, rk] = t.face_rep(t.face(tet, k));
  if (rt == tet && rk == k) return 1;
  const Gluing& g = t.gluing(tet, k);
  if (g.tet != rt || g.face != rk) throw TriangulationError("internal: face class is not a glued pair");
  std::vector<int> img;
  for (int a = 0; a < 4; ++a)
    if (a != k) img.push_back(g.perm[a]);
  int inv = (img[0] > img[1]) + (img[0] > img[2]) + (img[1] > img[2]);
  return inv % 2 ? -1 : 1;
}

}  // namespace

SparseMatrix boundary_matrix(const Triangulation& t) {
  SparseMatrix m{t.edges(), t.faces(), std::vector<std::vector<std::pair<int, int>>>(t.faces())};
  for (int f = 0; f < t.faces(); ++f) {
    auto [tet, k] = t.face_rep(f);
    int v[3], n = 0;
    for (int a = 0; a < 4; ++a)
      if (a != k) v[n++] = a;
    std::map<int, int> col;
    const int sides[3][3] = {{v[1], v[2], 1}, {v[0], v[2], -1}, {v[0], v[1], 1}};
    for (auto& s : sides) {
      int le = local_edge(s[0], s[1]);
      add_entry(col, t.edge(tet, le), s[2] * t.edge_sign(tet, le));
    }
    m.col[f] = flatten(col);
  }
  return m;
}

SparseMatrix vertex_edge_matrix(const Triangulation& t) {
  SparseMatrix m{t.vertices(), t.edges(), std::vector<std::vector<std::pair<int, int>>>(t.edges())};
  for (int e = 0; e < t.edges(); ++e) {
    auto [a, b] = t.edge_ends(e);
    std::map<int, int> col;
    add_entry(col, b, 1);
    add_entry(col, a, -1);
    m.col[e] = flatten(col);
  }
  return m;
}

SparseMatrix face_tet_matrix(const Triangulation& t) {
  SparseMatrix m{t.faces(), t.size(), std::vector<std::vector<std::pair<int, int>>>(t.size())};
  for (int i = 0; i < t.size(); ++i) {
    std::map<int, int> col;
    for (int k = 0; k < 4; ++k) add_entry(col, t.face(i, k), (k % 2 ? -1 : 1) * face_orientation(t, i, k));
    m.col[i] = flatten(col);
  }
  return m;
}

std::vector<int> cycle_vector(const Triangulation& t, const PLCurve& c) {
  std::vector<int> out(t.edges(), 0);
  const auto& w = c.vertices;
  if (w.size() < 2) throw TriangulationError("cycle needs at least two vertices");
  for (size_t i = 0; i < w.size(); ++i) {
    int u = w[i], v = w[(i + 1) % w.size()];
    auto e = t.edge_between(u, v);
    if (!e) throw TriangulationError("curve is not closed along edges");
    auto ends = t.edge_ends(*e);
    out[*e] += (ends[0] == u && ends[1] == v) ? 1 : -1;
  }
  return out;
}

std::vector<int> cycle_vector(const Triangulation& t, const std::vector<std::pair<int, int>>& steps) {
  std::vector<int> out(t.edges(), 0);
  if (steps.empty()) throw TriangulationError("empty cycle");
  auto tail = [&](std::pair<int, int> s) { return t.edge_ends(s.first)[s.second > 0 ? 0 : 1]; };
  auto head = [&](std::pair<int, int> s) { return t.edge_ends(s.first)[s.second > 0 ? 1 : 0]; };
  for (size_t i = 0; i < steps.size(); ++i) {
    if (head(steps[i]) != tail(steps[(i + 1) % steps.size()])) throw TriangulationError("edge cycle is not closed");
    out[steps[i].first] += steps[i].second;
  }
  return out;
}

namespace {

using Dense = std::vector<std::vector<mpz_class>>;

Dense to_dense(const SparseMatrix& s) {
  Dense d(s.rows, std::vector<mpz_class>(s.cols, 0));
  for (int c = 0; c < s.cols; ++c)
    for (auto [r, v] : s.col[c]) d[r][c] = v;
  return d;
}

// Diagonal of the Smith normal form (nonzero entries only).
std::vector<mpz_class> smith_diagonal(Dense a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  std::vector<mpz_class> diag;
  int p = 0;
  while (p < rows && p < cols) {
    // smallest nonzero pivot in the remaining block
    int pr = -1, pc = -1;
    for (int i = p; i < rows; ++i)
      for (int j = p; j < cols; ++j)
        if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
    if (pr < 0) break;
    std::swap(a[p], a[pr]);
    for (auto& row : a) std::swap(row[p], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = p + 1; i < rows; ++i) {
        if (a[i][p] == 0) continue;
        mpz_class q = a[i][p] / a[p][p];
        for (int j = p; j < cols; ++j) a[i][j] -= q * a[p][j];
        if (a[i][p] != 0) {
          std::swap(a[p], a[i]);
          clean = false;
        }
      }
      for (int j = p + 1; j < cols; ++j) {
        if (a[p][j] == 0) continue;
        mpz_class q = a[p][j] / a[p][p];
        for (int i = p; i < rows; ++i) a[i][j] -= q * a[i][p];
        if (a[p][j] != 0) {
          for (auto& row : a) std::swap(row[p], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // divisibility condition
        for (int i = p + 1; i < rows && clean; ++i)
          for (int j = p + 1; j < cols; ++j)
            if (a[i][j] % a[p][p] != 0) {
              for (int k = p; k < cols; ++k) a[p][k] += a[i][k];
              clean = false;
              break;
            }
      }
    }
    diag.push_back(abs(a[p][p]));
    ++p;
  }
  return diag;
}

}  // namespace

Homology first_homology(const Triangulation& t) {
  auto d1 = smith_diagonal(to_dense(vertex_edge_matrix(t)));
  auto d2 = smith_diagonal(to_dense(boundary_matrix(t)));
  Homology h;
  h.betti = t.edges() - static_cast<int>(d1.size()) - static_cast<int>(d2.size());
  for (auto& x : d2)
    if (x > 1) h.torsion.push_back(x.get_si());
  std::sort(h.torsion.begin(), h.torsion.end());
  return h;
}

}  // namespace km
