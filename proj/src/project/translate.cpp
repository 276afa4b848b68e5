#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

#include "km/project.hpp"

namespace km {

namespace {

using P2 = std::array<mpq_class, 2>;

P2 flat(const QPoint& p) { return {p[0], p[1]}; }
P2 sub(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }
mpq_class cross(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }
mpq_class dot(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }

QPoint sub3(const QPoint& a, const QPoint& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
QPoint cross3(const QPoint& a, const QPoint& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
mpq_class dot3(const QPoint& a, const QPoint& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
QPoint lerp(const QPoint& a, const QPoint& b, const mpq_class& t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}
QPoint midpoint(const QPoint& a, const QPoint& b) { return lerp(a, b, mpq_class(1, 2)); }

std::string pt_str(const QPoint& p) {
  return p[0].get_str() + "," + p[1].get_str() + "," + p[2].get_str();
}

struct Interval {
  bool empty = true;
  mpq_class lo, hi;
};

// Parameters s in [0,1] with p0 + s (p1 - p0) inside the closed triangle abc.
Interval segment_triangle(const QPoint& p0, const QPoint& p1, const QPoint& a, const QPoint& b, const QPoint& c) {
  QPoint n = cross3(sub3(b, a), sub3(c, a));
  int drop = 0;
  for (int k = 1; k < 3; ++k)
    if (abs(n[k]) > abs(n[drop])) drop = k;
  auto to2 = [drop](const QPoint& p) {
    P2 r;
    int j = 0;
    for (int k = 0; k < 3; ++k)
      if (k != drop) r[j++] = p[k];
    return r;
  };
  P2 A = to2(a), B = to2(b), C = to2(c), X0 = to2(p0), X1 = to2(p1);
  // clip s against the three edge half-planes
  auto clip = [&](Interval iv) {
    const P2* tri[3] = {&A, &B, &C};
    for (int e = 0; e < 3 && !iv.empty; ++e) {
      const P2& u = *tri[e];
      const P2& v = *tri[(e + 1) % 3];
      const P2& w = *tri[(e + 2) % 3];
      P2 ev = sub(v, u);
      int side = sgn(cross(ev, sub(w, u)));
      mpq_class f0 = side * cross(ev, sub(X0, u));
      mpq_class f1 = side * cross(ev, sub(X1, u)) - f0;  // f(s) = f0 + f1 s >= 0
      if (f1 == 0) {
        if (f0 < 0) iv.empty = true;
      } else if (f1 > 0) {
        mpq_class s = -f0 / f1;
        if (s > iv.lo) iv.lo = s;
      } else {
        mpq_class s = -f0 / f1;
        if (s < iv.hi) iv.hi = s;
      }
      if (iv.lo > iv.hi) iv.empty = true;
    }
    return iv;
  };
  mpq_class o0 = dot3(n, sub3(p0, a)), o1 = dot3(n, sub3(p1, a));
  if ((o0 > 0 && o1 > 0) || (o0 < 0 && o1 < 0)) return {};
  Interval iv;
  iv.empty = false;
  if (o0 == 0 && o1 == 0) {
    iv.lo = 0;
    iv.hi = 1;
  } else {
    iv.lo = iv.hi = o0 / (o0 - o1);
  }
  return clip(iv);
}

// The triangle pqc may meet the link only along segments `skip` and at p, q.
void check_triangle_clear(const SpaceLink& l, int comp, const QPoint& p, const QPoint& q, const QPoint& c,
                          const std::vector<int>& skip) {
  QPoint n = cross3(sub3(q, p), sub3(c, p));
  if (n[0] == 0 && n[1] == 0 && n[2] == 0) throw InvalidElementaryMove("degenerate triangle");
  for (int cc = 0; cc < static_cast<int>(l.comps.size()); ++cc) {
    const auto& v = l.comps[cc];
    const int m = static_cast<int>(v.size());
    for (int i = 0; i < m; ++i) {
      if (cc == comp && std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
      const QPoint& a = v[i];
      const QPoint& b = v[(i + 1) % m];
      Interval iv = segment_triangle(a, b, p, q, c);
      if (iv.empty) continue;
      bool ok = iv.lo == iv.hi && ((iv.lo == 0 && (a == p || a == q)) || (iv.lo == 1 && (b == p || b == q)));
      if (!ok) throw InvalidElementaryMove("triangle meets segment " + std::to_string(cc) + ":" + std::to_string(i));
    }
  }
}

bool collinear_between(const QPoint& a, const QPoint& x, const QPoint& b) {
  QPoint d = sub3(b, a), e = sub3(x, a);
  QPoint c = cross3(d, e);
  if (c[0] != 0 || c[1] != 0 || c[2] != 0) return false;
  mpq_class t = dot3(e, d) / dot3(d, d);
  return t > 0 && t < 1;
}

}  // namespace

std::string to_string(const ElementaryMove& m) {
  static const char* names[] = {"split", "merge", "insert", "remove"};
  std::string s = std::string(names[static_cast<int>(m.kind)]) + " " + std::to_string(m.comp) + ":" +
                  std::to_string(m.index);
  if (m.kind == ElementaryKind::Split || m.kind == ElementaryKind::Insert) s += " " + pt_str(m.point);
  return s;
}

SpaceLink apply_elementary(const SpaceLink& l, const ElementaryMove& m) {
  if (m.comp < 0 || m.comp >= static_cast<int>(l.comps.size())) throw InvalidElementaryMove("no such component");
  const auto& v = l.comps[m.comp];
  const int n = static_cast<int>(v.size());
  if (m.index < 0 || m.index >= n) throw InvalidElementaryMove("no such vertex");
  const int i = m.index;
  SpaceLink out = l;
  auto& w = out.comps[m.comp];
  switch (m.kind) {
    case ElementaryKind::Split:
      if (!collinear_between(v[i], m.point, v[(i + 1) % n])) throw InvalidElementaryMove("split point not inside segment");
      w.insert(w.begin() + i + 1, m.point);
      break;
    case ElementaryKind::Merge:
      if (n <= 3) throw InvalidElementaryMove("component too short to merge");
      if (!collinear_between(v[(i + n - 1) % n], v[i], v[(i + 1) % n])) throw InvalidElementaryMove("vertex is not straight");
      w.erase(w.begin() + i);
      break;
    case ElementaryKind::Insert:
      check_triangle_clear(l, m.comp, v[i], v[(i + 1) % n], m.point, {i});
      w.insert(w.begin() + i + 1, m.point);
      break;
    case ElementaryKind::Remove:
      if (n <= 3) throw InvalidElementaryMove("component too short to remove a vertex");
      check_triangle_clear(l, m.comp, v[(i + n - 1) % n], v[(i + 1) % n], v[i], {(i + n - 1) % n, i});
      w.erase(w.begin() + i);
      break;
  }
  return out;
}

namespace {

// Critical parameters of the vertex (comp, vi) moving from d to c.
std::vector<mpq_class> sweep_events(const SpaceLink& l, int comp, int vi, const QPoint& D, const QPoint& C) {
  const auto& v = l.comps[comp];
  const int n = static_cast<int>(v.size());
  const int ia = (vi + n - 1) % n, ib = (vi + 1) % n;
  P2 a = flat(v[ia]), b = flat(v[ib]), d = flat(D), dc = sub(flat(C), d);

  struct Seg {
    P2 p, q;
  };
  std::vector<Seg> stat;
  std::vector<P2> points;  // static vertices and static crossings
  std::vector<int> point_kind;  // 1: the vertex a, 2: the vertex b, 0: other
  for (int c = 0; c < static_cast<int>(l.comps.size()); ++c) {
    const int m = static_cast<int>(l.comps[c].size());
    for (int i = 0; i < m; ++i) {
      if (c == comp && i == vi) continue;
      points.push_back(flat(l.comps[c][i]));
      point_kind.push_back(c == comp && i == ia ? 1 : (c == comp && i == ib ? 2 : 0));
      if (c == comp && (i == ia || i == vi)) continue;
      stat.push_back({flat(l.comps[c][i]), flat(l.comps[c][(i + 1) % m])});
    }
  }
  for (size_t x = 0; x < stat.size(); ++x)
    for (size_t y = x + 1; y < stat.size(); ++y) {
      P2 d1 = sub(stat[x].q, stat[x].p), d2 = sub(stat[y].q, stat[y].p), r = sub(stat[y].p, stat[x].p);
      mpq_class den = cross(d1, d2);
      if (den == 0) continue;
      mpq_class u = cross(r, d2) / den, w = cross(r, d1) / den;
      if (u > 0 && u < 1 && w > 0 && w < 1) {
        points.push_back({stat[x].p[0] + u * d1[0], stat[x].p[1] + u * d1[1]});
        point_kind.push_back(0);
      }
    }

  std::vector<mpq_class> ts;
  auto take = [&](const mpq_class& t) {
    if (t > 0 && t < 1) ts.push_back(t);
  };
  // moving point over a static segment
  for (auto& s : stat) {
    P2 e = sub(s.q, s.p);
    mpq_class c0 = cross(e, sub(d, s.p)), c1 = cross(e, dc);
    if (c1 == 0) {
      if (c0 == 0) throw SweepDegenerate("moving vertex slides along a segment line");
      continue;
    }
    mpq_class t = -c0 / c1;
    P2 p{d[0] + t * dc[0], d[1] + t * dc[1]};
    mpq_class u = dot(sub(p, s.p), e) / dot(e, e);
    if (u >= 0 && u <= 1) take(t);
  }
  // a static point on one of the two moving segments
  for (size_t k = 0; k < points.size(); ++k) {
    const P2& V = points[k];
    for (int side = 0; side < 2; ++side) {
      if ((side == 0 && point_kind[k] == 1) || (side == 1 && point_kind[k] == 2)) continue;
      const P2& o = side == 0 ? a : b;
      P2 ov = sub(V, o);
      mpq_class c0 = cross(sub(d, o), ov), c1 = cross(dc, ov);
      if (c1 == 0) {
        if (c0 == 0) throw SweepDegenerate("static point on the line of a moving segment");
        continue;
      }
      mpq_class t = -c0 / c1;
      P2 p{d[0] + t * dc[0], d[1] + t * dc[1]};
      P2 op = sub(p, o);
      mpq_class len = dot(op, op);
      if (len == 0) {
        take(t);
        continue;
      }
      mpq_class u = dot(ov, op) / len;
      if (u >= 0 && u <= 1) take(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

// One Reidemeister move from `from` to a diagram isomorphic to `to`, or a
// short search when several changes coincide.
void connect(Diagram& from, const Diagram& to, std::vector<Move>& out, TranslateStats* stats) {
  auto target = canonical_code(to);
  if (canonical_code(from) == target) return;
  for (const Move& m : all_moves(from)) {
    MoveResult r;
    try {
      r = apply_move(from, m);
    } catch (const MoveMismatch&) {
      continue;
    }
    if (r.diagram.crossings() != to.crossings() || r.diagram.loops() != to.loops()) continue;
    if (canonical_code(r.diagram) == target) {
      out.push_back(m);
      from = r.diagram;
      return;
    }
  }
  if (stats) ++stats->fallback_searches;
  BfsLimits lim;
  lim.max_crossings = std::max(from.crossings(), to.crossings()) + 2;
  lim.max_depth = 4;
  lim.max_states = 400000;
  auto path = bfs_connect(from, to, lim);
  if (!path) throw SweepDegenerate("coinciding sweep events could not be resolved");
  for (const Move& m : *path) {
    out.push_back(m);
    from = apply_move(from, m).diagram;
  }
}

}  // namespace

std::vector<Move> translate_move(const SpaceLink& l, const ElementaryMove& m, Diagram& carried,
                                 TranslateStats* stats) {
  SpaceLink after = apply_elementary(l, m);
  Diagram target = project_diagram(after);
  std::vector<Move> out;
  if (m.kind == ElementaryKind::Split || m.kind == ElementaryKind::Merge) {
    if (!isomorphic(carried, target)) throw IrregularProjection("vertex split changed the projection");
    return out;
  }
  // the sweep acts on a link with the moving vertex present at both ends
  SpaceLink base = l;
  int vi;
  QPoint from, to;
  const auto& v = l.comps[m.comp];
  const int n = static_cast<int>(v.size());
  if (m.kind == ElementaryKind::Insert) {
    vi = m.index + 1;
    from = midpoint(v[m.index], v[(m.index + 1) % n]);
    to = m.point;
    base.comps[m.comp].insert(base.comps[m.comp].begin() + vi, from);
  } else {
    vi = m.index;
    from = v[vi];
    to = midpoint(v[(vi + n - 1) % n], v[(vi + 1) % n]);
  }
  auto ts = sweep_events(base, m.comp, vi, from, to);
  if (stats) stats->events += static_cast<int>(ts.size());
  std::vector<mpq_class> samples;
  mpq_class prev = 0;
  for (auto& t : ts) {
    samples.push_back((prev + t) / 2);
    prev = t;
  }
  samples.push_back((prev + 1) / 2);
  for (auto& s : samples) {
    SpaceLink cur = base;
    cur.comps[m.comp][vi] = lerp(from, to, s);
    auto r = project(cur);
    if (!r.regular) throw SweepDegenerate("irregular projection between events: " + r.witness);
    connect(carried, r.diagram, out, stats);
  }
  connect(carried, target, out, stats);
  return out;
}

std::string TranslationReport::json() const {
  nlohmann::json j;
  j["shear"] = shear;
  j["n"] = n;
  j["k"] = k;
  j["total"] = total;
  j["bound"] = bound.get_str();
  j["step_budgets_ok"] = step_budgets_ok;
  j["diagram_bound_ok"] = diagram_bound_ok;
  j["growth_ok"] = growth_ok;
  j["symmetric_growth_ok"] = symmetric_growth_ok;
  j["total_ok"] = total_ok;
  long cum = 0;
  for (auto& s : steps) {
    cum += s.moves;
    j["steps"].push_back({{"L", s.link_size}, {"D", s.crossing_measure}, {"moves", s.moves}, {"events", s.events},
                          {"budget", s.budget}, {"cumulative", cum}});
  }
  return j.dump(2);
}

TranslationReport translate_script(const SpaceLink& l, const std::vector<ElementaryMove>& s) {
  std::vector<SpaceLink> links{l};
  for (auto& m : s) links.push_back(apply_elementary(links.back(), m));

  TranslationReport rep;
  rep.k = static_cast<int>(s.size());
  rep.n = l.segments();
  for (auto& x : links) rep.sizes.push_back(x.segments());
  // shear 1 stands for the unsheared link
  for (long N = 1; N <= (1L << 40); N *= 2) {
    auto sh = [N](const SpaceLink& x) { return N == 1 ? x : shear(x, N); };
    try {
      TranslationReport r = rep;
      r.shear = N;
      r.script.start = project_diagram(sh(links[0]));
      Diagram carried = r.script.start;
      for (size_t i = 0; i < s.size(); ++i) {
        ElementaryMove m = s[i];
        if (N != 1) {
          SpaceLink tmp{{{m.point}}};
          m.point = shear(tmp, N).comps[0][0];
        }
        StepReport st;
        st.link_size = links[i].segments();
        st.crossing_measure = crossing_measure(carried);
        st.budget = 2L * st.link_size + 2L * st.crossing_measure;
        TranslateStats ts;
        auto mv = translate_move(sh(links[i]), m, carried, &ts);
        st.moves = static_cast<int>(mv.size());
        st.events = ts.events;
        r.script.moves.insert(r.script.moves.end(), mv.begin(), mv.end());
        r.total += st.moves;
        r.steps.push_back(st);
      }
      rep = std::move(r);
      break;
    } catch (const IrregularProjection&) {
    } catch (const SweepDegenerate&) {
    }
    if (N == (1L << 40)) throw IrregularProjection("no shear makes every step regular");
  }
  const int n = rep.n, k = rep.k;
  for (int i = 0; i <= k; ++i) {
    int li = rep.sizes[i];
    if (li > n + i) rep.growth_ok = false;
    if (li > n + k - i) rep.symmetric_growth_ok = false;
  }
  for (size_t i = 0; i < rep.steps.size(); ++i) {
    auto& st = rep.steps[i];
    if (st.moves > st.budget) rep.step_budgets_ok = false;
    if (static_cast<long>(st.crossing_measure) > static_cast<long>(st.link_size) * st.link_size)
      rep.diagram_bound_ok = false;
  }
  // 2k(n + k/2 + 1)^2 = k (2n + k + 2)^2 / 2
  mpz_class q = 2 * n + k + 2;
  rep.bound = mpz_class(k) * q * q / 2;
  rep.total_ok = mpz_class(rep.total) <= rep.bound;
  return rep;
}

}  // namespace km
