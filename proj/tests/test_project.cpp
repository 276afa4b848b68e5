#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "km/project.hpp"

using namespace km;

namespace {

QPoint P(long x, long y, long z) { return {mpq_class(x), mpq_class(y), mpq_class(z)}; }

// Sign of each crossing from coordinates alone: over direction x under direction.
int geometric_writhe(const SpaceLink& l, const ProjectionReport& r) {
  int w = 0;
  auto dir = [&](const SegmentId& s) {
    const auto& c = l.comps[s.comp];
    const auto& a = c[s.index];
    const auto& b = c[(s.index + 1) % c.size()];
    return std::array<mpq_class, 2>{b[0] - a[0], b[1] - a[1]};
  };
  for (auto& x : r.crossings) {
    auto o = dir(x.over), u = dir(x.under);
    w += sgn(o[0] * u[1] - o[1] * u[0]);
  }
  return w;
}

SpaceLink trefoil_curve(int samples, double scale) {
  SpaceLink l;
  l.comps.emplace_back();
  for (int i = 0; i < samples; ++i) {
    double t = 2 * M_PI * i / samples;
    double x = std::sin(t) + 2 * std::sin(2 * t), y = std::cos(t) - 2 * std::cos(2 * t), z = -std::sin(3 * t);
    l.comps[0].push_back(P(std::lround(scale * x), std::lround(scale * y), std::lround(scale * z)));
  }
  return l;
}

SpaceLink random_knot(std::mt19937& rng, int n, int box) {
  std::uniform_int_distribution<int> d(-box, box);
  while (true) {
    SpaceLink l;
    l.comps.emplace_back();
    for (int i = 0; i < n; ++i) l.comps[0].push_back(P(d(rng), d(rng), d(rng)));
    if (project(l).regular) return l;
  }
}

}  // namespace

TEST(Project, PlanarTriangleIsTrivial) {
  SpaceLink l{{{P(0, 0, -3), P(5, 0, -3), P(0, 4, -3)}}};
  auto r = project(l);
  ASSERT_TRUE(r.regular);
  EXPECT_TRUE(is_trivial(r.diagram));
}

TEST(Project, TrefoilCurve) {
  SpaceLink l = trefoil_curve(24, 20);
  auto r = project(l);
  ASSERT_TRUE(r.regular) << r.witness;
  EXPECT_EQ(r.diagram.crossings(), 3);
  int w = geometric_writhe(l, r);
  EXPECT_EQ(std::abs(w), 3);
  EXPECT_EQ(writhe(r.diagram), w);
  const char* right = "K[ X(1,5,2,4), X(3,1,4,6), X(5,3,6,2) ]";
  const char* left = "K[ X(1,4,2,5), X(3,6,4,1), X(5,2,6,3) ]";
  EXPECT_TRUE(isomorphic(r.diagram, parse_diagram(w > 0 ? right : left)));
  // mirror in z flips every crossing
  SpaceLink m = l;
  for (auto& p : m.comps[0]) p[2] = -p[2];
  EXPECT_EQ(writhe(project_diagram(m)), -w);
  EXPECT_LE(crossing_measure(r.diagram), l.segments() * l.segments());
}

TEST(Project, IrregularWitnesses) {
  SpaceLink vertical{{{P(0, 0, 0), P(0, 0, 5), P(3, 1, 0)}}};
  auto r = project(vertical);
  EXPECT_FALSE(r.regular);
  EXPECT_NE(r.witness.find("vertical"), std::string::npos);
  // a vertex of one triangle projects onto the other's edge
  SpaceLink touch{{{P(0, 0, 0), P(4, 0, 0), P(0, 4, 0)}, {P(2, 0, 3), P(2, -4, 3), P(5, -3, 3)}}};
  r = project(touch);
  EXPECT_FALSE(r.regular);
  EXPECT_THROW(project_diagram(touch), IrregularProjection);
  // shared projected vertex without alternation
  SpaceLink kiss{{{P(0, 0, 0), P(4, 1, 0), P(4, -1, 0)}, {P(0, 0, 2), P(-4, 1, 2), P(-4, -1, 2)}}};
  EXPECT_FALSE(project(kiss).regular);
}

TEST(Project, VertexCrossing) {
  // two triangles whose vertices sit over one point and cross there
  SpaceLink l{{{P(0, 0, 0), P(4, 1, 0), P(4, 5, 0), P(-4, -1, 0)},
               {P(0, 0, 2), P(1, -4, 2), P(5, -4, 2), P(-1, 4, 2)}}};
  auto r = project(l);
  ASSERT_TRUE(r.regular) << r.witness;
  EXPECT_EQ(r.diagram.crossings() % 2, 0);
  EXPECT_EQ(link_components(r.diagram), 2);
  int at_vertex = 0;
  for (auto& c : r.crossings) at_vertex += c.s_under == 0 && c.s_over == 0;
  EXPECT_EQ(at_vertex, 1);
}

TEST(Project, CollinearVertexCrossing) {
  // the over strand arrives along the line the under strand leaves on
  SpaceLink l{{{P(-4, 4, 0), P(0, 0, 0), P(-1, -4, 0)}, {P(-8, -3, 2), P(0, 0, 2), P(4, -4, 2)}}};
  auto r = project(l);
  ASSERT_TRUE(r.regular) << r.witness;
  EXPECT_EQ(r.diagram.crossings(), 4);
  EXPECT_EQ(link_components(r.diagram), 2);
  int at_vertex = 0;
  for (auto& c : r.crossings) at_vertex += c.s_under == 0 && c.s_over == 0;
  EXPECT_EQ(at_vertex, 1);
}

TEST(Shear, FixesDegeneracies) {
  SpaceLink vertical{{{P(0, 0, 0), P(0, 0, 5), P(3, 1, 0), P(2, 7, 1)}}};
  SpaceLink s = perturb_regular(vertical);
  EXPECT_TRUE(project(s).regular);
  SpaceLink kiss{{{P(0, 0, 0), P(4, 1, 0), P(4, -1, 0)}, {P(0, 0, 2), P(-4, 1, 2), P(-4, -1, 2)}}};
  EXPECT_TRUE(project(perturb_regular(kiss)).regular);
  SpaceLink l = trefoil_curve(24, 20);
  EXPECT_TRUE(isomorphic(project_diagram(perturb_regular(l)), project_diagram(l)));
}

TEST(Elementary, Preconditions) {
  SpaceLink l{{{P(0, 0, 0), P(6, 0, 0), P(0, 6, 0)}, {P(1, 1, -5), P(2, 1, 5), P(2, 2, 5)}}};
  // the second triangle pierces the first
  EXPECT_THROW(apply_elementary(l, {ElementaryKind::Insert, 0, 0, P(3, 4, 0)}), InvalidElementaryMove);
  EXPECT_NO_THROW(apply_elementary(l, {ElementaryKind::Insert, 0, 0, P(3, -4, 0)}));
  EXPECT_THROW(apply_elementary(l, {ElementaryKind::Split, 0, 0, P(3, 1, 0)}), InvalidElementaryMove);
  SpaceLink k = apply_elementary(l, {ElementaryKind::Split, 0, 0, P(3, 0, 0)});
  EXPECT_EQ(k.comps[0].size(), 4u);
  EXPECT_NO_THROW(apply_elementary(k, {ElementaryKind::Merge, 0, 1, {}}));
}

TEST(Translate, SplitIsSilent) {
  SpaceLink l = trefoil_curve(24, 20);
  Diagram d = project_diagram(l);
  auto a = l.comps[0][0], b = l.comps[0][1];
  QPoint mid{(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2};
  auto mv = translate_move(l, {ElementaryKind::Split, 0, 0, mid}, d);
  EXPECT_TRUE(mv.empty());
}

TEST(Translate, CurlIsOneFirstMove) {
  // pull one side of a planar square over the opposite side: a curl
  SpaceLink l{{{P(0, 0, 0), P(10, 0, 0), P(10, 10, 0), P(0, 10, 0)}}};
  Diagram d = project_diagram(l);
  ElementaryMove m{ElementaryKind::Insert, 0, 1, P(5, -4, 3)};
  SpaceLink after = apply_elementary(l, m);
  Diagram target = project_diagram(after);
  TranslateStats st;
  auto mv = translate_move(l, m, d, &st);
  EXPECT_TRUE(isomorphic(d, target));
  ASSERT_EQ(mv.size(), 1u);
  EXPECT_EQ(mv[0].kind, MoveKind::R1Plus);
}

TEST(Translate, SlideOverCrossingIsOneThirdMove) {
  // two static strands cross at the origin; a higher strand is dragged across it
  SpaceLink l{{{P(-10, -10, 0), P(10, 10, 0), P(40, -60, 0)},
               {P(10, -10, 1), P(-10, 10, 1), P(-60, -40, 1)},
               {P(-10, -2, 5), P(10, -2, 5), P(0, -40, 5)}}};
  Diagram d = project_diagram(l);
  ElementaryMove m{ElementaryKind::Insert, 2, 0, P(1, 4, 5)};
  Diagram target = project_diagram(apply_elementary(l, m));
  TranslateStats st;
  auto mv = translate_move(l, m, d, &st);
  EXPECT_TRUE(isomorphic(d, target));
  ASSERT_EQ(mv.size(), 1u);
  EXPECT_EQ(mv[0].kind, MoveKind::R3);
  EXPECT_GE(st.events, 3);
}

TEST(Translate, RandomMovesReplay) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> d(-6, 6);
  int done = 0, r3 = 0, r1 = 0;
  for (int trial = 0; trial < 400 && done < 40; ++trial) {
    SpaceLink l = random_knot(rng, 5 + trial % 3, 6);
    Diagram start = project_diagram(l);
    const int n = static_cast<int>(l.comps[0].size());
    ElementaryMove m;
    if (trial % 2) {
      m = {ElementaryKind::Insert, 0, static_cast<int>(rng() % n), P(d(rng), d(rng), d(rng))};
    } else {
      m = {ElementaryKind::Remove, 0, static_cast<int>(rng() % n), {}};
    }
    SpaceLink after;
    try {
      after = apply_elementary(l, m);
    } catch (const InvalidElementaryMove&) {
      continue;
    }
    if (!project(after).regular) continue;
    Diagram carried = start;
    std::vector<Move> mv;
    try {
      mv = translate_move(l, m, carried);
    } catch (const SweepDegenerate&) {
      continue;
    }
    Diagram replayed = replay(MoveScript{start, mv});
    EXPECT_TRUE(isomorphic(replayed, project_diagram(after))) << to_string(m);
    EXPECT_LE(static_cast<int>(mv.size()), 2 * l.segments() + 2 * crossing_measure(start));
    for (auto& x : mv) {
      r3 += x.kind == MoveKind::R3;
      r1 += x.kind == MoveKind::R1Plus || x.kind == MoveKind::R1Minus;
    }
    ++done;
  }
  EXPECT_GE(done, 30);
  EXPECT_GT(r3, 0);
  EXPECT_GT(r1, 0);
}

TEST(Translate, ScriptBudgets) {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> d(-6, 6);
  SpaceLink l = random_knot(rng, 6, 6);
  std::vector<ElementaryMove> script;
  SpaceLink cur = l;
  while (script.size() < 6) {
    const int n = static_cast<int>(cur.comps[0].size());
    ElementaryMove m = (rng() % 2 && n > 4) ? ElementaryMove{ElementaryKind::Remove, 0, static_cast<int>(rng() % n), {}}
                                            : ElementaryMove{ElementaryKind::Insert, 0, static_cast<int>(rng() % n),
                                                             P(d(rng), d(rng), d(rng))};
    try {
      cur = apply_elementary(cur, m);
      script.push_back(m);
    } catch (const InvalidElementaryMove&) {
    }
  }
  TranslationReport r = translate_script(l, script);
  EXPECT_EQ(static_cast<int>(r.steps.size()), 6);
  EXPECT_TRUE(r.step_budgets_ok);
  EXPECT_TRUE(r.diagram_bound_ok);
  EXPECT_TRUE(r.growth_ok);
  EXPECT_TRUE(r.total_ok);
  Diagram end = replay(r.script);
  SpaceLink final_link = r.shear == 1 ? cur : shear(cur, r.shear);
  EXPECT_TRUE(isomorphic(end, project_diagram(final_link)));
  EXPECT_TRUE(translate_script(l, {}).script.moves.empty());
}
