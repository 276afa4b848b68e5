#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "km/embed.hpp"

using namespace km;

namespace {

const char* kRightTrefoil = "K[ X(1,5,2,4), X(3,1,4,6), X(5,3,6,2) ]";
const char* kCurl = "K[ X(1,1,2,2) ]";

Diagram random_diagram(std::mt19937& rng, int steps, int max_crossings) {
  Diagram d = parse_diagram("L[]");
  for (int i = 0; i < steps; ++i) {
    auto ms = all_moves(d);
    std::vector<Move> ok;
    for (auto& m : ms) {
      int delta = m.kind == MoveKind::R1Plus ? 1 : m.kind == MoveKind::R2Plus ? 2 : 0;
      if (d.crossings() + delta <= max_crossings) ok.push_back(m);
    }
    if (ok.empty()) break;
    d = apply_move(d, ok[rng() % ok.size()]).diagram;
  }
  return d;
}

}  // namespace

TEST(Augment, Counts) {
  AugmentedGraph curl = augment(parse_diagram(kCurl));
  EXPECT_EQ(curl.m, 5);
  AugmentedGraph loop = augment(parse_diagram("L[]"));
  EXPECT_EQ(loop.m, 3);
  ASSERT_EQ(loop.loop_triangles.size(), 1u);
  AugmentedGraph tre = augment(parse_diagram(kRightTrefoil));
  EXPECT_EQ(tre.m, 15);
  // four distinct specials per crossing
  for (int c = 0; c < tre.crossings; ++c) {
    std::set<int> s;
    for (int k = 0; k < 4; ++k) s.insert(tre.near[dart(c, k)]);
    EXPECT_EQ(s.size(), 4u);
    for (int v : s) EXPECT_GE(v, tre.crossings);
  }
  // framed triangulation: m + 3 vertices, 2m + 2 faces in all, simple
  for (auto* g : {&curl, &loop, &tre}) {
    EXPECT_EQ(static_cast<int>(g->triangles.size()), 2 * g->m + 2);
    EXPECT_EQ(static_cast<int>(g->edges().size()), 3 * g->vertices() - 6);
    EXPECT_NO_THROW(check_sphere(g->triangles, g->vertices()));
  }
}

TEST(Augment, LinksWithLoops) {
  AugmentedGraph g = augment(parse_diagram("L[ X(1,3,2,4), X(3,1,4,2) ; loops=2 ]"));
  EXPECT_EQ(g.m, 2 + 8 + 6);
  EXPECT_EQ(g.loop_triangles.size(), 2u);
  EXPECT_NO_THROW(check_sphere(g.triangles, g.vertices()));
}

TEST(CheckSphere, RejectsBadInput) {
  EXPECT_THROW(check_sphere({{0, 1, 2}}, 3), EmbedError);
  EXPECT_THROW(check_sphere({{0, 1, 2}, {0, 1, 2}}, 3), EmbedError);
  EXPECT_NO_THROW(check_sphere({{0, 1, 2}, {2, 1, 0}}, 3));
}

TEST(Grid, K4) {
  std::vector<Tri> k4{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  std::array<int, 3> outer{0, 2, 1};
  GridEmbedding e = grid_embed(k4, 4, outer);
  std::string why;
  EXPECT_TRUE(is_planar_drawing(k4, outer, e, &why)) << why;
  for (auto& p : e.xy) {
    EXPECT_GE(p[0], 0);
    EXPECT_LE(p[0], 2);
    EXPECT_GE(p[1], 0);
    EXPECT_LE(p[1], 2);
  }
  // the outer face must really be a face
  EXPECT_THROW(grid_embed(k4, 4, {0, 1, 2}), EmbedError);
}

TEST(Grid, PlanarityCheckCatchesCrossings) {
  std::vector<Tri> k4{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  GridEmbedding e;
  e.xy = {{2, 1}, {1, 0}, {0, 2}, {3, 3}};  // inner vertex outside the outer triangle
  EXPECT_FALSE(is_planar_drawing(k4, {0, 2, 1}, e));
}

TEST(Grid, TrefoilFitsTheGrid) {
  AugmentedGraph g = augment(parse_diagram(kRightTrefoil));
  GridEmbedding e = grid_embed(g);
  std::string why;
  ASSERT_TRUE(is_planar_drawing(g.triangles, g.frame, e, &why)) << why;
  EXPECT_LE(e.side, g.m + 1);
  for (auto& p : e.xy) {
    EXPECT_GE(p[0], 0);
    EXPECT_LE(p[0], 29);
    EXPECT_GE(p[1], 0);
    EXPECT_LE(p[1], 29);
  }
}

TEST(Grid, RandomDiagrams) {
  std::mt19937 rng(11);
  for (int i = 0; i < 60; ++i) {
    Diagram d = random_diagram(rng, 2 + i % 9, 8);
    AugmentedGraph g = augment(d);
    GridEmbedding e = grid_embed(g);
    std::string why;
    EXPECT_TRUE(is_planar_drawing(g.triangles, g.frame, e, &why)) << serialize(d) << " " << why;
    EXPECT_LE(e.side, g.m + 1);
  }
}

TEST(Prisms, OnePrismHasFourteenTets) {
  AugmentedGraph g;
  g.triangles = {{0, 1, 2}, {2, 1, 0}};
  g.frame = {0, 1, 2};
  GridEmbedding e = grid_embed(g.triangles, 3, g.frame);
  PrismComplex p = build_prisms(g, e, 1);
  EXPECT_EQ(p.bounded_faces, 1);
  ASSERT_EQ(p.tets.size(), 14u);
  Triangulation t = from_simplices(p.tets, "outer_sphere");
  EXPECT_NO_THROW(t.check_manifold());
  auto bc = t.boundary_components();
  ASSERT_EQ(bc.size(), 1u);
  EXPECT_EQ(bc[0].euler, 2);
  EXPECT_EQ(bc[0].faces.size(), 2u + 3 * 4);
}

TEST(Prisms, SharedWallsMatch) {
  AugmentedGraph g;
  g.m = 1;
  g.triangles = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
  g.frame = {0, 2, 1};
  GridEmbedding e = grid_embed(g.triangles, 4, g.frame);
  PrismComplex p = build_prisms(g, e, 2);
  ASSERT_EQ(p.tets.size(), 2u * 3 * 14);
  Triangulation t = from_simplices(p.tets, "outer_sphere");
  EXPECT_NO_THROW(t.check_manifold());
  auto bc = t.boundary_components();
  ASSERT_EQ(bc.size(), 1u);
  EXPECT_EQ(bc[0].euler, 2);
  // 3 + 3 caps and 3 outer walls of 4 triangles per slab
  EXPECT_EQ(bc[0].faces.size(), 6u + 2 * 3 * 4);
  // interior walls are glued from both sides
  EXPECT_EQ(t.interior_faces() * 2 + 30, 4 * t.size());
}

TEST(Route, CurlUsesOneColumn) {
  Diagram d = parse_diagram(kCurl);
  EmbeddedComplement ec = build_complement_input(d);
  ASSERT_EQ(ec.knot.size(), 1u);
  const auto& cs = ec.polytope.coords();
  int up = 0;
  for (int v : ec.knot[0].vertices) up += cs[v][2] == 1;
  EXPECT_EQ(up, 1);
  ASSERT_EQ(ec.crossing_columns.size(), 1u);
  auto [lo, hi] = ec.crossing_columns[0];
  EXPECT_EQ(cs[lo][2], -1);
  EXPECT_EQ(cs[hi][2], 1);
  EXPECT_EQ(cs[lo][0], cs[hi][0]);
  EXPECT_EQ(cs[lo][1], cs[hi][1]);
  // no vertical knot segment
  const auto& k = ec.knot[0].vertices;
  for (size_t i = 0; i < k.size(); ++i) {
    auto a = cs[k[i]], b = cs[k[(i + 1) % k.size()]];
    EXPECT_FALSE(a[0] == b[0] && a[1] == b[1]);
  }
}

TEST(Route, LoopIsALowTriangle) {
  EmbeddedComplement ec = build_complement_input(parse_diagram("L[]"));
  ASSERT_EQ(ec.knot.size(), 1u);
  ASSERT_EQ(ec.knot[0].vertices.size(), 3u);
  for (int v : ec.knot[0].vertices) EXPECT_EQ(ec.polytope.coords()[v][2], -1);
  EXPECT_EQ(ec.polytope.size(), construction_tets(3));
  EXPECT_TRUE(ec.projection_ok);
  EXPECT_TRUE(ec.interior_ok);
}

TEST(Complement, Curl) {
  EmbeddedComplement ec = build_complement_input(parse_diagram(kCurl));
  EXPECT_EQ(ec.n, 1);
  EXPECT_LE(ec.m, 5);
  EXPECT_EQ(ec.polytope.size(), construction_tets(ec.m));
  EXPECT_LE(ec.polytope.size(), 840);
  EXPECT_TRUE(ec.tet_bound_ok);
  EXPECT_TRUE(ec.box_ok);
  EXPECT_TRUE(ec.interior_ok);
  EXPECT_TRUE(ec.convex_ok);
  EXPECT_TRUE(ec.projection_ok) << ec.projection_witness;
}

TEST(Complement, Trefoil) {
  Diagram d = parse_diagram(kRightTrefoil);
  EmbeddedComplement ec = build_complement_input(d);
  EXPECT_EQ(ec.m, 15);
  EXPECT_EQ(ec.prisms, 2 * ec.m + 1);
  EXPECT_EQ(ec.polytope.size(), 14 * 3 * ec.prisms);
  EXPECT_LE(ec.polytope.size(), 2520);
  for (auto& q : ec.polytope.coords()) {
    EXPECT_GE(q[0], 0);
    EXPECT_LE(q[0], 90);
    EXPECT_GE(q[1], 0);
    EXPECT_LT(q[1], 90);
    EXPECT_GE(q[2], -6);
    EXPECT_LE(q[2], 6);
  }
  EXPECT_TRUE(ec.interior_ok);
  EXPECT_TRUE(ec.convex_ok);
  ASSERT_TRUE(ec.projection_ok) << ec.projection_witness;
  EXPECT_TRUE(isomorphic(project_diagram(ec.link), d));
  EXPECT_FALSE(isomorphic(project_diagram(ec.link), parse_diagram("K[ X(1,4,2,5), X(3,6,4,1), X(5,2,6,3) ]")));
  auto bc = ec.polytope.boundary_components();
  ASSERT_EQ(bc.size(), 1u);
  EXPECT_EQ(bc[0].euler, 2);
  EXPECT_EQ(bc[0].mark, "outer_sphere");
  auto j = nlohmann::json::parse(ec.certificate());
  EXPECT_EQ(j["tetrahedra"], ec.polytope.size());
  EXPECT_EQ(j["checks"]["projection_isomorphic"], true);
}

TEST(Complement, RandomDiagramsProjectBack) {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    Diagram d = random_diagram(rng, 3 + i % 7, 7);
    EmbeddedComplement ec = build_complement_input(d);
    EXPECT_TRUE(ec.projection_ok) << serialize(d) << " " << ec.projection_witness;
    EXPECT_TRUE(ec.convex_ok) << serialize(d);
    EXPECT_TRUE(ec.interior_ok);
    EXPECT_EQ(ec.polytope.size(), construction_tets(ec.m));
    if (ec.n >= 1) {
      EXPECT_TRUE(ec.tet_bound_ok);
      EXPECT_TRUE(ec.box_ok);
    }
  }
}

TEST(Complement, FileRoundTrip) {
  EmbeddedComplement ec = build_complement_input(parse_diagram(kCurl));
  std::string text = write_triangulation(ec.polytope) + write_knot(ec.knot);
  Triangulation back = read_triangulation(text);
  EXPECT_EQ(write_triangulation(back), write_triangulation(ec.polytope));
  auto k = read_knot(text);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0].vertices, ec.knot[0].vertices);
  EXPECT_THROW(read_knot("knot 1 x"), TriangulationError);
}
