#include <gtest/gtest.h>

#include <random>

#include "km/diagram.hpp"

using namespace km;

namespace {

const char* kRightTrefoil = "K[ X(1,5,2,4), X(3,1,4,6), X(5,3,6,2) ]";
const char* kLeftTrefoil = "K[ X(1,4,2,5), X(3,6,4,1), X(5,2,6,3) ]";
const char* kFigureEight = "K[ X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8) ]";
const char* kHopf = "L[ X(4,1,3,2), X(2,3,1,4) ]";

Diagram loop() { return parse_diagram("L[]"); }

}  // namespace

TEST(Parse, EmptyCodeIsOneLoop) {
  Diagram d = loop();
  EXPECT_EQ(d.crossings(), 0);
  EXPECT_EQ(d.loops(), 1);
  EXPECT_TRUE(is_trivial(d));
  EXPECT_EQ(parse_diagram("K[ ; loops=1 ]"), d);
}

TEST(Parse, Trefoil) {
  Diagram d = parse_diagram(kRightTrefoil);
  EXPECT_EQ(d.crossings(), 3);
  EXPECT_EQ(d.darts() / 2, 6);
  EXPECT_EQ(link_components(d), 1);
  EXPECT_EQ(d.faces().size(), 5u);
}

TEST(Parse, NonAlternatingLabelsRejected) {
  EXPECT_THROW(parse_diagram("K[ V(1:o,2:o,3:u,4:u), V(1:u,2:o,3:u,4:o) ]"), DiagramValidityError);
}

TEST(Parse, ExplicitLabelsMatchX) {
  Diagram a = parse_diagram("K[ V(5:o,2:u,4:o,1:u), X(3,1,4,6), X(5,3,6,2) ]");
  EXPECT_TRUE(isomorphic(a, parse_diagram(kRightTrefoil)));
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse_diagram("K[ X(1,1,2,2) ] x"), DiagramSyntaxError);
  EXPECT_THROW(parse_diagram("K[ X(1,1,2) ]"), DiagramSyntaxError);
  EXPECT_THROW(parse_diagram("Q[]"), DiagramSyntaxError);
  EXPECT_THROW(parse_diagram("K[ X(1,2,3,4) ]"), DiagramValidityError);
  EXPECT_THROW(parse_diagram("K[ ; loops=0 ]"), DiagramValidityError);
  // one vertex, two edges joining opposite ends: embeds on a torus only
  EXPECT_THROW(parse_diagram("K[ X(1,2,1,2) ]"), DiagramValidityError);
}

TEST(Parse, RoundTrip) {
  for (const char* s : {kRightTrefoil, kLeftTrefoil, kFigureEight, kHopf, "L[ ; loops=3 ]"}) {
    Diagram d = parse_diagram(s);
    EXPECT_EQ(parse_diagram(serialize_raw(d)), d);
    Diagram c = parse_diagram(serialize(d));
    EXPECT_TRUE(isomorphic(c, d));
    EXPECT_EQ(serialize(c), serialize(d));
  }
}

TEST(Stats, CrossingMeasure) {
  EXPECT_EQ(crossing_measure(loop()), 0);
  EXPECT_EQ(crossing_measure(parse_diagram("L[ ; loops=2 ]")), 1);
  EXPECT_EQ(crossing_measure(parse_diagram(kRightTrefoil)), 3);
  EXPECT_EQ(crossing_measure(parse_diagram(kHopf)), 2);
}

TEST(Stats, Components) {
  EXPECT_EQ(link_components(parse_diagram(kRightTrefoil)), 1);
  EXPECT_EQ(link_components(parse_diagram(kHopf)), 2);
  EXPECT_EQ(link_components(loop()), 1);
  EXPECT_FALSE(is_trivial(parse_diagram("L[ ; loops=2 ]")));
  EXPECT_FALSE(is_trivial(parse_diagram(kRightTrefoil)));
}

TEST(Stats, Writhe) {
  EXPECT_EQ(writhe(loop()), 0);
  EXPECT_EQ(writhe(parse_diagram(kRightTrefoil)), 3);
  EXPECT_EQ(writhe(parse_diagram(kRightTrefoil), {-1}), 3);
  EXPECT_EQ(writhe(parse_diagram(kLeftTrefoil)), -3);
  EXPECT_EQ(writhe(parse_diagram(kFigureEight)), 0);
  EXPECT_THROW(writhe(parse_diagram(kHopf)), DiagramValidityError);
}

TEST(Iso, MirrorIsNotIsomorphic) {
  EXPECT_FALSE(isomorphic(parse_diagram(kRightTrefoil), parse_diagram(kLeftTrefoil)));
  // relabelling edges and rotating a crossing by two slots keeps the class
  Diagram b = parse_diagram("K[ X(2,4,1,5), X(3,1,4,6), X(5,3,6,2) ]");
  EXPECT_TRUE(isomorphic(b, parse_diagram(kRightTrefoil)));
}

TEST(Moves, CurlOnLoopAndBack) {
  for (int sg : {+1, -1}) {
    Move m{MoveKind::R1Plus, -1, 0, {}, sg, true};
    auto r = apply_move(loop(), m);
    EXPECT_EQ(r.diagram.crossings(), 1);
    EXPECT_EQ(writhe(r.diagram), sg);
    auto back = apply_move(r.diagram, r.inverse);
    EXPECT_TRUE(is_trivial(back.diagram));
  }
}

TEST(Moves, NoBigonOnLoop) {
  Move m{MoveKind::R2Minus, 0, -1, {}, 1, true};
  EXPECT_THROW(apply_move(loop(), m), MoveMismatch);
}

TEST(Moves, AlternatingTriangleRejectsR3) {
  Diagram t = parse_diagram(kRightTrefoil);
  for (int f = 0; f < static_cast<int>(t.faces().size()); ++f) {
    if (t.faces()[f].size() != 3) continue;
    EXPECT_THROW(apply_move(t, Move{MoveKind::R3, f, -1, {}, 1, true}), MoveMismatch);
  }
}

TEST(Moves, ThirdMoveOnBuiltTriangle) {
  // loop -> R2 self-push -> R1 curls give triangles with an over-over side
  std::mt19937 rng(7);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 20; ++trial) {
    Diagram d = loop();
    for (int k = 0; k < 3; ++k) {
      auto ms = all_moves(d);
      d = apply_move(d, ms[rng() % ms.size()]).diagram;
    }
    for (const Move& m : reducing_moves(d)) {
      if (m.kind != MoveKind::R3) continue;
      auto r = apply_move(d, m);
      EXPECT_EQ(r.diagram.crossings(), d.crossings());
      EXPECT_NO_THROW(validate(r.diagram));
      EXPECT_TRUE(isomorphic(apply_move(r.diagram, r.inverse).diagram, d));
      ++done;
    }
  }
  EXPECT_GT(done, 5);
}

TEST(Moves, RandomRoundTrips) {
  std::mt19937 rng(11);
  Diagram d = parse_diagram(kFigureEight);
  for (int i = 0; i < 300; ++i) {
    auto ms = all_moves(d);
    const Move& m = ms[rng() % ms.size()];
    auto r = apply_move(d, m);
    validate(r.diagram);
    int delta = r.diagram.crossings() - d.crossings();
    switch (m.kind) {
      case MoveKind::R1Plus: EXPECT_EQ(delta, 1); break;
      case MoveKind::R1Minus: EXPECT_EQ(delta, -1); break;
      case MoveKind::R2Plus: EXPECT_EQ(delta, 2); break;
      case MoveKind::R2Minus: EXPECT_EQ(delta, -2); break;
      case MoveKind::R3: EXPECT_EQ(delta, 0); break;
    }
    int w0 = writhe(d), w1 = writhe(r.diagram);
    if (m.kind == MoveKind::R1Plus || m.kind == MoveKind::R1Minus)
      EXPECT_EQ(std::abs(w1 - w0), 1);
    else
      EXPECT_EQ(w1, w0);
    EXPECT_TRUE(isomorphic(apply_move(r.diagram, r.inverse).diagram, d)) << to_string(m);
    EXPECT_EQ(crossing_measure(r.diagram), crossing_measure(d) + delta);
    d = r.diagram.crossings() > 9 ? d : r.diagram;
  }
}

TEST(Moves, SecondMoveVariants) {
  Diagram curl = apply_move(loop(), Move{MoveKind::R1Plus, -1, 0, {}, 1, true}).diagram;
  Diagram two = parse_diagram("L[ ; loops=2 ]");
  Diagram curl_and_loop = apply_move(two, Move{MoveKind::R1Plus, -1, 0, {}, 1, true}).diagram;
  std::vector<std::pair<Diagram, Move>> cases;
  for (bool ov : {true, false}) {
    for (int f = 0; f < 2; ++f) cases.push_back({curl, Move{MoveKind::R2Plus, f, -1, {0, 0}, 1, ov}});
    cases.push_back({curl_and_loop, Move{MoveKind::R2Plus, 0, 0, {0}, 1, ov}});
    cases.push_back({two, Move{MoveKind::R2Plus, -1, 0, {1}, 1, ov}});
  }
  Diagram two_curls = apply_move(curl_and_loop, Move{MoveKind::R1Plus, -1, 0, {}, -1, true}).diagram;
  ASSERT_EQ(two_curls.graph_components().size(), 2u);
  for (bool ov : {true, false}) {
    Move m{MoveKind::R2Plus, 0, -1, {0, 0}, 1, ov};
    const auto& fs = two_curls.faces();
    for (int f = 1; f < static_cast<int>(fs.size()); ++f)
      if (dart_crossing(fs[f][0]) != dart_crossing(fs[0][0])) m.other_face = f;
    cases.push_back({two_curls, m});
  }
  for (auto& [d, m] : cases) {
    auto r = apply_move(d, m);
    EXPECT_NO_THROW(validate(r.diagram)) << to_string(m);
    EXPECT_EQ(r.diagram.crossings(), d.crossings() + 2);
    EXPECT_EQ(r.inverse.kind, MoveKind::R2Minus);
    EXPECT_TRUE(isomorphic(apply_move(r.diagram, r.inverse).diagram, d)) << to_string(m);
    EXPECT_EQ(parse_move(to_string(m)), m);
  }
  EXPECT_EQ(link_components(apply_move(two, Move{MoveKind::R2Plus, -1, 0, {1}, 1, true}).diagram), 2);
}

TEST(Moves, EveryBigonRemovalHasAnInverse) {
  std::mt19937 rng(19);
  int seen = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Diagram d = trial % 2 ? loop() : parse_diagram("L[ ; loops=2 ]");
    for (int k = 0; k < 4; ++k) {
      auto ms = all_moves(d);
      Diagram nd = apply_move(d, ms[rng() % ms.size()]).diagram;
      if (nd.crossings() <= 7) d = nd;
    }
    for (const Move& m : reducing_moves(d)) {
      if (m.kind != MoveKind::R2Minus) continue;
      auto r = apply_move(d, m);
      EXPECT_TRUE(isomorphic(apply_move(r.diagram, r.inverse).diagram, d)) << serialize(d);
      ++seen;
    }
  }
  EXPECT_GT(seen, 50);
}

TEST(Script, TextRoundTripWithCheckpoints) {
  std::mt19937 rng(3);
  MoveScript s{parse_diagram(kRightTrefoil), {}};
  Diagram d = s.start;
  for (int i = 0; i < 250; ++i) {
    auto ms = all_moves(d);
    Move m = ms[rng() % ms.size()];
    Diagram nd = apply_move(d, m).diagram;
    if (nd.crossings() > 8) continue;
    s.moves.push_back(m);
    d = nd;
  }
  std::string text = write_script(s, 100);
  MoveScript t = read_script(text);
  EXPECT_EQ(t.moves.size(), s.moves.size());
  EXPECT_EQ(replay(t), d);
  EXPECT_EQ(parse_move("R2+ @face:4 arcs:0,2 push:over"),
            (Move{MoveKind::R2Plus, 4, -1, {0, 2}, 1, true}));
  EXPECT_THROW(parse_move("R2+ @face:x"), DiagramSyntaxError);
}

TEST(Search, Curl) {
  Diagram d = apply_move(loop(), Move{MoveKind::R1Plus, -1, 0, {}, 1, true}).diagram;
  auto s = bfs_untangle(d, {});
  ASSERT_TRUE(s.has_value());
  ASSERT_EQ(s->size(), 1u);
  EXPECT_EQ((*s)[0].kind, MoveKind::R1Minus);
}

TEST(Search, DoubledLoop) {
  Diagram d = apply_move(loop(), Move{MoveKind::R2Plus, -1, 0, {}, 1, true}).diagram;
  EXPECT_EQ(d.crossings(), 2);
  auto s = bfs_untangle(d, {});
  ASSERT_TRUE(s.has_value());
  ASSERT_EQ(s->size(), 1u);
  EXPECT_EQ((*s)[0].kind, MoveKind::R2Minus);
}

TEST(Search, TrefoilExhausts) {
  BfsLimits lim;
  lim.max_crossings = 5;
  lim.max_depth = 8;
  EXPECT_FALSE(bfs_untangle(parse_diagram(kRightTrefoil), lim).has_value());
}

TEST(Search, StateLimitIsDistinct) {
  BfsLimits lim;
  lim.max_crossings = 6;
  lim.max_depth = 10;
  lim.max_states = 50;
  EXPECT_THROW(bfs_untangle(parse_diagram(kRightTrefoil), lim), SearchLimitExceeded);
}
