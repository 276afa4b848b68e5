#include <cctype>
#include <map>
#include <sstream>

#include "km/normalsurf.hpp"

namespace km {

int quad_type(int a, int b) {
  if (a == b || a < 0 || b < 0 || a > 3 || b > 3) throw NormalError("quad_type: bad vertices");
  int other = a == 0 ? b : b == 0 ? a : 6 - a - b;  // partner of 0
  return 3 + other;
}

bool quad_side0(int q, int a) { return a == 0 || a == q - 3; }

NormalVector NormalVector::zero(int t) {
  NormalVector x;
  x.tets = t;
  x.v.assign(7 * t, 0);
  return x;
}

mpz_class NormalVector::max() const {
  mpz_class m = 0;
  for (auto& c : v)
    if (c > m) m = c;
  return m;
}

bool NormalVector::is_zero() const {
  for (auto& c : v)
    if (c != 0) return false;
  return true;
}

std::string NormalVector::str() const {
  std::ostringstream os;
  os << "t=" << tets << "; v=";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  return os.str();
}

NormalVector NormalVector::parse(const std::string& s) {
  auto semi = s.find(';');
  if (s.rfind("t=", 0) != 0 || semi == std::string::npos) throw NormalError("normal vector: expected 't=<N>; v=...'");
  NormalVector x;
  try {
    x.tets = std::stoi(s.substr(2, semi - 2));
  } catch (const std::exception&) {
    throw NormalError("normal vector: bad tetrahedron count");
  }
  if (x.tets < 0) throw NormalError("normal vector: negative tetrahedron count");
  std::string rest = s.substr(semi + 1);
  auto p = rest.find("v=");
  if (p == std::string::npos) throw NormalError("normal vector: missing v=");
  std::istringstream is(rest.substr(p + 2));
  std::string tok;
  while (std::getline(is, tok, ',')) {
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(tok.begin());
    mpz_class c;
    if (tok.empty() || c.set_str(tok, 10) != 0) throw NormalError("normal vector: bad entry '" + tok + "'");
    x.v.push_back(c);
  }
  if (static_cast<int>(x.v.size()) != 7 * x.tets) throw NormalError("normal vector: expected 7t entries");
  return x;
}

NormalVector operator*(long k, const NormalVector& x) {
  NormalVector y = x;
  for (auto& c : y.v) c *= k;
  return y;
}

NormalVector operator+(const NormalVector& a, const NormalVector& b) {
  if (a.tets != b.tets) throw NormalError("adding vectors of different length");
  NormalVector y = a;
  for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += b.v[i];
  return y;
}

int MatchingRow::squared_length() const {
  int s = 0;
  for (auto& [c, k] : terms) s += k * k;
  return s;
}

bool MatchingSystem::satisfied_by(const NormalVector& x) const {
  if (x.tets != tets) throw NormalError("vector length does not match the triangulation");
  for (auto& r : rows) {
    mpz_class s = 0;
    for (auto& [c, k] : r.terms) s += k * x.v[c];
    if (s != 0) return false;
  }
  return true;
}

MatchingSystem matching_system(const Triangulation& t) {
  MatchingSystem m;
  m.tets = t.size();
  for (int f = 0; f < t.faces(); ++f) {
    if (t.face_is_boundary(f)) continue;
    auto [t0, f0] = t.face_rep(f);
    const Gluing& g = t.gluing(t0, f0);
    const int t1 = g.tet, f1 = g.face;
    for (int a = 0; a < 4; ++a) {
      if (a == f0) continue;
      const int b = g.perm[a];
      // arcs of the face cutting off corner a, counted on both sides
      std::map<int, int> row;
      auto add = [&](int c, int k) {
        if ((row[c] += k) == 0) row.erase(c);
      };
      add(7 * t0 + a, 1);
      add(7 * t0 + quad_type(a, f0), 1);
      add(7 * t1 + b, -1);
      add(7 * t1 + quad_type(b, f1), -1);
      MatchingRow r;
      r.face = f;
      r.corner = a;
      r.terms.assign(row.begin(), row.end());
      m.rows.push_back(std::move(r));
    }
  }
  return m;
}

bool is_admissible(const Triangulation& t, const NormalVector& x) {
  if (x.tets != t.size() || static_cast<int>(x.v.size()) != 7 * t.size())
    throw NormalError("vector length does not match the triangulation");
  for (auto& c : x.v)
    if (c < 0) return false;
  for (int k = 0; k < t.size(); ++k) {
    int quads = 0;
    for (int q = 4; q < 7; ++q) quads += x.at(k, q) != 0;
    if (quads > 1) return false;
  }
  return matching_system(t).satisfied_by(x);
}

NormalVector vertex_link(const Triangulation& t, int vertex) {
  NormalVector x = NormalVector::zero(t.size());
  for (int k = 0; k < t.size(); ++k)
    for (int a = 0; a < 4; ++a)
      if (t.vertex(k, a) == vertex) x.at(k, a) += 1;
  return x;
}

mpz_class vertex_bound(int t) {
  mpz_class b = 1;
  if (t < 1) return 0;
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), 7 * t - 1);
  return b;
}

bool hilbert_bound_check(const NormalVector& x) {
  mpz_class b = x.tets;
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), 7 * x.tets + 2);
  return x.max() < b;
}

}  // namespace km
