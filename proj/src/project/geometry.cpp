#include <algorithm>
#include <map>
#include <sstream>

#include "km/project.hpp"

namespace km {

int SpaceLink::segments() const {
  int n = 0;
  for (auto& c : comps) n += static_cast<int>(c.size());
  return n;
}

namespace {

using P2 = std::array<mpq_class, 2>;

P2 flat(const QPoint& p) { return {p[0], p[1]}; }
P2 sub(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
mpq_class cross(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
mpq_class dot(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }
bool is_zero(const P2& a) { return a[0] == 0 && a[1] == 0; }

// Counterclockwise order of directions starting from `base`.
bool ccw_before(const P2& base, const P2& u, const P2& v) {
  auto half = [&](const P2& w) {
    int c = sgn(cross(base, w));
    if (c > 0 || (c == 0 && sgn(dot(base, w)) > 0)) return 0;
    return 1;
  };
  int hu = half(u), hv = half(v);
  if (hu != hv) return hu < hv;
  return sgn(cross(u, v)) > 0;
}

std::string seg_name(const SegmentId& s) { return std::to_string(s.comp) + ":" + std::to_string(s.index); }

struct Visit {
  mpq_class s;      // position along the segment
  int crossing = 0;
  bool over = false;
  P2 in_dir, out_dir;
};

struct End {
  long label;
  P2 dir;
  bool over;
};

}  // namespace

ProjectionReport project(const SpaceLink& l) {
  ProjectionReport rep;
  auto fail = [&](const std::string& w) {
    rep.regular = false;
    rep.witness = w;
    return rep;
  };
  for (auto& c : l.comps)
    if (c.size() < 3) return fail("component with fewer than 3 vertices");

  struct Seg {
    SegmentId id;
    QPoint p, q;
    P2 a, b;
  };
  std::vector<Seg> segs;
  for (int c = 0; c < static_cast<int>(l.comps.size()); ++c) {
    const auto& v = l.comps[c];
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
      Seg s{{c, i}, v[i], v[(i + 1) % n], flat(v[i]), flat(v[(i + 1) % n])};
      if (is_zero(sub(s.b, s.a))) return fail("vertical segment " + seg_name(s.id));
      segs.push_back(s);
    }
  }
  auto adjacent = [&](const SegmentId& x, const SegmentId& y) {
    if (x.comp != y.comp) return false;
    int n = static_cast<int>(l.comps[x.comp].size());
    return (x.index + 1) % n == y.index || (y.index + 1) % n == x.index;
  };

  // vertices sharing a projected point must form alternating crossings
  std::map<P2, std::vector<std::pair<int, int>>> at;
  for (int c = 0; c < static_cast<int>(l.comps.size()); ++c)
    for (int i = 0; i < static_cast<int>(l.comps[c].size()); ++i) at[flat(l.comps[c][i])].push_back({c, i});

  std::vector<std::vector<Visit>> visits(segs.size());
  std::vector<int> seg_base(l.comps.size(), 0);
  for (size_t c = 1; c < l.comps.size(); ++c) seg_base[c] = seg_base[c - 1] + static_cast<int>(l.comps[c - 1].size());
  auto seg_index = [&](const SegmentId& s) { return seg_base[s.comp] + s.index; };
  int ncross = 0;
  std::vector<P2> cross_points;

  auto nb = [&](int c, int i, int d) {
    int n = static_cast<int>(l.comps[c].size());
    return l.comps[c][((i + d) % n + n) % n];
  };
  for (auto& [pt, vs] : at) {
    if (vs.size() == 1) continue;
    if (vs.size() > 2) return fail("three vertices over one point");
    auto [c1, i1] = vs[0];
    auto [c2, i2] = vs[1];
    const QPoint& v1 = l.comps[c1][i1];
    const QPoint& v2 = l.comps[c2][i2];
    if (v1[2] == v2[2]) return fail("vertices coincide in space");
    P2 d[4] = {sub(flat(nb(c1, i1, -1)), pt), sub(flat(nb(c1, i1, 1)), pt), sub(flat(nb(c2, i2, -1)), pt),
               sub(flat(nb(c2, i2, 1)), pt)};
    for (auto& x : d)
      if (is_zero(x)) return fail("vertical segment at a vertex crossing");
    // strands 1 and 2 must alternate around the point
    std::vector<int> ord{1, 2, 3};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return ccw_before(d[0], d[a], d[b]); });
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (sgn(cross(d[a], d[b])) == 0 && sgn(dot(d[a], d[b])) > 0) return fail("overlapping directions at a vertex");
    if (!(ord[0] >= 2 && ord[1] == 1 && ord[2] >= 2)) return fail("vertex touching without crossing");
    bool first_over = v1[2] > v2[2];
    int id = ncross++;
    cross_points.push_back(pt);
    SegmentId s1{c1, i1}, s2{c2, i2};
    visits[seg_index(s1)].push_back(Visit{0, id, first_over, d[0], d[1]});
    visits[seg_index(s2)].push_back(Visit{0, id, !first_over, d[2], d[3]});
    CrossingRecord r;
    r.under = first_over ? s2 : s1;
    r.over = first_over ? s1 : s2;
    r.s_under = 0;
    r.s_over = 0;
    r.point = pt;
    rep.crossings.push_back(r);
  }

  for (size_t x = 0; x < segs.size(); ++x)
    for (size_t y = x + 1; y < segs.size(); ++y) {
      const Seg& s = segs[x];
      const Seg& t = segs[y];
      P2 d1 = sub(s.b, s.a), d2 = sub(t.b, t.a), r = sub(t.a, s.a);
      mpq_class den = cross(d1, d2);
      if (adjacent(s.id, t.id)) {
        // only a fold back along the shared vertex can overlap
        if (den == 0) {
          int n = static_cast<int>(l.comps[s.id.comp].size());
          bool t_after_s = (s.id.index + 1) % n == t.id.index;
          P2 from_shared_s = t_after_s ? sub(s.a, s.b) : d1;
          P2 from_shared_t = t_after_s ? d2 : sub(t.a, t.b);
          if (sgn(dot(from_shared_s, from_shared_t)) > 0) return fail("segments " + seg_name(s.id) + " and " + seg_name(t.id) + " fold");
        }
        continue;
      }
      if (den == 0) {
        if (cross(r, d1) != 0) continue;
        mpq_class len = dot(d1, d1);
        mpq_class u0 = dot(r, d1) / len, u1 = dot(sub(t.b, s.a), d1) / len;
        if (u0 > u1) std::swap(u0, u1);
        if (u1 < 0 || u0 > 1) continue;
        if (u1 == 0 || u0 == 1) continue;  // touching at one vertex pair, checked above
        return fail("segments " + seg_name(s.id) + " and " + seg_name(t.id) + " overlap");
      }
      mpq_class u = cross(r, d2) / den, v = cross(r, d1) / den;
      if (u < 0 || u > 1 || v < 0 || v > 1) continue;
      bool u_end = u == 0 || u == 1, v_end = v == 0 || v == 1;
      if (u_end && v_end) continue;  // vertex pair, checked above
      if (u_end || v_end)
        return fail("vertex over segment: " + seg_name(s.id) + " and " + seg_name(t.id));
      mpq_class zs = s.p[2] + u * (s.q[2] - s.p[2]);
      mpq_class zt = t.p[2] + v * (t.q[2] - t.p[2]);
      if (zs == zt) return fail("segments " + seg_name(s.id) + " and " + seg_name(t.id) + " meet in space");
      bool s_over = zs > zt;
      int id = ncross++;
      P2 pt{s.a[0] + u * d1[0], s.a[1] + u * d1[1]};
      cross_points.push_back(pt);
      visits[x].push_back(Visit{u, id, s_over, P2{-d1[0], -d1[1]}, d1});
      visits[y].push_back(Visit{v, id, !s_over, P2{-d2[0], -d2[1]}, d2});
      CrossingRecord rec;
      rec.under = s_over ? t.id : s.id;
      rec.over = s_over ? s.id : t.id;
      rec.s_under = s_over ? v : u;
      rec.s_over = s_over ? u : v;
      rec.point = pt;
      rep.crossings.push_back(rec);
    }

  {
    auto pts = cross_points;
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) return fail("triple point");
  }

  // label edges along each component and collect the four ends of each crossing
  std::vector<std::array<std::optional<End>, 4>> ends(ncross);  // under-in, under-out, over-in, over-out
  long label = 0;
  int loops = 0;
  for (int c = 0; c < static_cast<int>(l.comps.size()); ++c) {
    std::vector<Visit*> seq;
    for (int i = 0; i < static_cast<int>(l.comps[c].size()); ++i) {
      auto& vs = visits[seg_index({c, i})];
      std::sort(vs.begin(), vs.end(), [](const Visit& a, const Visit& b) { return a.s < b.s; });
      for (auto& v : vs) seq.push_back(&v);
    }
    if (seq.empty()) {
      ++loops;
      continue;
    }
    const long first = label + 1;
    const int m = static_cast<int>(seq.size());
    for (int j = 0; j < m; ++j) {
      long in = first + (j + m - 1) % m, out = first + j;
      Visit& v = *seq[j];
      int base = v.over ? 2 : 0;
      ends[v.crossing][base] = End{in, v.in_dir, v.over};
      ends[v.crossing][base + 1] = End{out, v.out_dir, v.over};
    }
    label += m;
  }
  std::ostringstream pd;
  pd << (l.comps.size() > 1 ? "L[ " : "K[ ");
  for (int x = 0; x < ncross; ++x) {
    auto& e = ends[x];
    std::vector<int> ord{1, 2, 3};
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return ccw_before(e[0]->dir, e[a]->dir, e[b]->dir); });
    if (ord[1] != 1) return fail("crossing ends do not alternate");
    pd << (x ? ", " : "") << "X(" << e[0]->label << ',' << e[ord[0]]->label << ',' << e[1]->label << ','
       << e[ord[2]]->label << ')';
  }
  if (loops && ncross) pd << " ; loops=" << loops;
  if (!ncross) pd << "; loops=" << loops;
  pd << " ]";
  rep.diagram = parse_diagram(pd.str());
  rep.regular = true;
  return rep;
}

Diagram project_diagram(const SpaceLink& l) {
  auto r = project(l);
  if (!r.regular) throw IrregularProjection(r.witness);
  return r.diagram;
}

SpaceLink shear(const SpaceLink& l, long n) {
  SpaceLink out = l;
  mpq_class N(n), N2 = N * N;
  for (auto& c : out.comps)
    for (auto& p : c) {
      mpq_class x = p[0], y = p[1], z = p[2];
      p[0] = N2 * x + N * z;
      p[1] = N2 * y + z;
    }
  return out;
}

long regular_shear(const SpaceLink& l, long max_n) {
  for (long n = 2; n <= max_n; n *= 2)
    if (project(shear(l, n)).regular) return n;
  throw IrregularProjection("no regular shear up to the limit");
}

SpaceLink perturb_regular(const SpaceLink& l) { return shear(l, regular_shear(l)); }

}  // namespace km
