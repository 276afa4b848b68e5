#include <bitset>
#include <set>

#include "km/normalsurf.hpp"

namespace km {

namespace {

constexpr int kMaxDim = 256;
using Bits = std::bitset<kMaxDim>;

struct Ray {
  std::vector<mpz_class> x;
  Bits zero;
};

void make_primitive(std::vector<mpz_class>& x) {
  mpz_class g = 0;
  for (auto& c : x) g = gcd(g, c);
  if (g > 1)
    for (auto& c : x) c /= g;
}

}  // namespace

std::vector<std::vector<mpz_class>> cone_rays(int n, const std::vector<std::vector<std::pair<int, int>>>& rows) {
  if (n > kMaxDim) throw DimensionLimitExceeded("cone dimension " + std::to_string(n) + " too large");
  std::vector<Ray> rays;
  for (int i = 0; i < n; ++i) {
    Ray r;
    r.x.assign(n, 0);
    r.x[i] = 1;
    for (int j = 0; j < n; ++j)
      if (j != i) r.zero.set(j);
    rays.push_back(std::move(r));
  }
  int processed = 0;
  for (const auto& row : rows) {
    if (row.empty()) continue;
    std::vector<mpz_class> s(rays.size());
    std::vector<int> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      for (auto& [c, k] : row) s[i] += k * rays[i].x[c];
      if (s[i] > 0)
        pos.push_back(static_cast<int>(i));
      else if (s[i] < 0)
        neg.push_back(static_cast<int>(i));
      else
        next.push_back(rays[i]);
    }
    if (pos.empty() || neg.empty()) {
      // the hyperplane only touches the cone: keep the rays on it
      rays = std::move(next);
      ++processed;
      continue;
    }
    const std::size_t need = n - processed >= 2 ? static_cast<std::size_t>(n - processed - 2) : 0;
    for (int p : pos)
      for (int q : neg) {
        Bits z = rays[p].zero & rays[q].zero;
        if (z.count() < need) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == q) continue;
          if ((rays[r].zero & z) == z) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr;
        nr.x.resize(n);
        for (int i = 0; i < n; ++i) nr.x[i] = s[p] * rays[q].x[i] - s[q] * rays[p].x[i];
        make_primitive(nr.x);
        nr.zero = z;
        next.push_back(std::move(nr));
      }
    rays = std::move(next);
    ++processed;
  }
  std::vector<std::vector<mpz_class>> out;
  for (auto& r : rays) out.push_back(std::move(r.x));
  return out;
}

std::vector<NormalVector> vertex_rays(const Triangulation& t, const EnumLimits& lim) {
  const int nt = t.size();
  if (7 * nt > lim.max_coordinates)
    throw DimensionLimitExceeded("7t = " + std::to_string(7 * nt) + " exceeds the limit " +
                                 std::to_string(lim.max_coordinates));
  const MatchingSystem ms = matching_system(t);
  std::set<std::vector<mpz_class>> found;
  // one run per choice of allowed quad type in each tetrahedron
  std::vector<int> choice(nt, 0);
  while (true) {
    std::vector<int> col(7 * nt, -1);  // full coordinate -> pattern coordinate
    std::vector<int> back;
    for (int k = 0; k < nt; ++k) {
      for (int a = 0; a < 4; ++a) {
        col[7 * k + a] = static_cast<int>(back.size());
        back.push_back(7 * k + a);
      }
      col[7 * k + 4 + choice[k]] = static_cast<int>(back.size());
      back.push_back(7 * k + 4 + choice[k]);
    }
    std::vector<std::vector<std::pair<int, int>>> rows;
    for (auto& r : ms.rows) {
      std::vector<std::pair<int, int>> row;
      for (auto& [c, k] : r.terms)
        if (col[c] >= 0) row.push_back({col[c], k});
      rows.push_back(std::move(row));
    }
    for (auto& ray : cone_rays(static_cast<int>(back.size()), rows)) {
      std::vector<mpz_class> full(7 * nt, 0);
      for (std::size_t i = 0; i < ray.size(); ++i) full[back[i]] = ray[i];
      found.insert(std::move(full));
    }
    int k = 0;
    while (k < nt && ++choice[k] == 3) choice[k++] = 0;
    if (k == nt) break;
  }
  std::vector<NormalVector> out;
  for (auto& v : found) {
    NormalVector x;
    x.tets = nt;
    x.v = v;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace km
