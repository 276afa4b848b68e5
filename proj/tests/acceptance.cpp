// Acceptance checks: one PASS/FAIL line per criterion. With no arguments every
// criterion runs; otherwise only the named ones. Exit status is nonzero if any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isotopy_support.hpp"
#include "km/cli.hpp"
#include "km/complex.hpp"
#include "km/diagram.hpp"
#include "km/embed.hpp"
#include "km/isotopy.hpp"
#include "km/normalsurf.hpp"
#include "km/project.hpp"
#include "support.hpp"

using namespace km;
namespace fs = std::filesystem;

namespace {

// Tolerances and sizes, fixed here.
constexpr double kEmbedSeconds = 10;
constexpr double kConeSecondsPerFixture = 60;
constexpr double kCertifySeconds = 600;
constexpr int kMatchingFixtures = 20;
constexpr int kMatchingMaxTets = 6;
constexpr int kDisks = 200;
constexpr int kDiskMaxTriangles = 50;
constexpr int kSurfaceMaxLength = 40;
constexpr int kTranslateMoves = 50;
constexpr int kRoundTrips = 500;
constexpr int kUntangleDepth = 4;

struct Result {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      else detail.str("");
      pass = false;
      detail << what;
    }
  }
};

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string str(const mpz_class& x) { return x.get_str(); }

// ---------------------------------------------------------------------------

void embed(Result& r) {
  const std::string code = "K[ X(1,5,2,4), X(3,1,4,6), X(5,3,6,2) ]";
  fs::path dir = fs::temp_directory_path() / "km_acceptance_embed";
  fs::create_directories(dir);
  std::ofstream(dir / "trefoil.knot") << code;
  auto t0 = std::chrono::steady_clock::now();
  cli::Options opt;
  opt.out = (dir / "trefoil.tri").string();
  cli::Outcome o = cli::cmd_build((dir / "trefoil.knot").string(), opt);
  double secs = since(t0);
  r.check(o.exit_code == cli::kOk, "build failed: " + o.summary);
  if (o.exit_code != cli::kOk) return;

  Triangulation t = read_triangulation(support::read_file(opt.out));
  try {
    t.check_manifold();
  } catch (const std::exception& e) {
    r.check(false, std::string("not a manifold: ") + e.what());
  }
  auto knot = read_knot(support::read_file(opt.out));
  r.check(knot.size() == 1, "knot missing from the output");
  fs::remove_all(dir);

  const int m = o.report["m"];
  const long tets = t.size();
  r.check(tets == 84L * (m + 1),
          "t = " + std::to_string(tets) + " but 84(m+1) = " + std::to_string(84L * (m + 1)) + " for m = " +
              std::to_string(m));
  r.check(tets <= 2520, "t = " + std::to_string(tets) + " exceeds 840n = 2520");

  Diagram d = parse_diagram(code);
  EmbeddedComplement ec = build_complement_input(d);
  bool box = true;
  for (auto& q : ec.polytope.coords())
    box &= q[0] >= 0 && q[0] <= 90 && q[1] >= 0 && q[1] <= 90 && q[2] >= -6 && q[2] <= 6;
  r.check(box, "vertex outside [0,90]x[0,90]x[-6,6]");
  ProjectionReport pr = project(ec.link);
  r.check(pr.regular && isomorphic(pr.diagram, d), "routed knot does not project to the input diagram");
  r.check(secs < kEmbedSeconds, "build took " + std::to_string(secs) + " s");
  if (r.pass)
    r.detail << "t=" << tets << " m=" << m << " 84(m+1)=" << 84L * (m + 1) << " time=" << secs << "s";
}

void matching(Result& r) {
  std::mt19937 rng(41);
  int rows_total = 0;
  for (int i = 0; i < kMatchingFixtures; ++i) {
    Triangulation t = support::random_gluing(rng, 1 + i % kMatchingMaxTets, i % 4);
    auto ms = matching_system(t);
    const int rows = static_cast<int>(ms.rows.size());
    rows_total += rows;
    r.check(rows == 3 * t.interior_faces(), "fixture " + std::to_string(i) + ": rows != 3 * interior faces");
    r.check(rows <= 6 * t.size(), "fixture " + std::to_string(i) + ": rows > 6t");
    for (auto& row : ms.rows) r.check(row.squared_length() <= 4, "row squared length > 4");
    for (int v = 0; v < t.vertices(); ++v)
      r.check(ms.satisfied_by(vertex_link(t, v)), "vertex link violates the system");
  }
  if (r.pass) r.detail << kMatchingFixtures << " fixtures, " << rows_total << " equations";
}

void cone(Result& r) {
  std::vector<std::pair<std::string, Triangulation>> fx{{"ball", support::fixture("ball.tri")},
                                                        {"solid_torus", support::fixture("solid_torus.tri")}};
  std::mt19937 rng(8);
  for (int i = 0; i < 6; ++i)
    fx.push_back({"random" + std::to_string(i), support::random_gluing(rng, 2 + i % 2, 1 + i % 3)});
  fx.push_back({"random_t3", support::random_gluing(rng, 3, 0)});
  double worst = 0;
  int rays_total = 0;
  for (auto& [name, t] : fx) {
    if (t.size() > 3) continue;
    auto t0 = std::chrono::steady_clock::now();
    auto rays = vertex_rays(t);
    double secs = since(t0);
    worst = std::max(worst, secs);
    rays_total += static_cast<int>(rays.size());
    r.check(rays == support::support_oracle(t), name + ": rays differ from the oracle");
    for (auto& x : rays) r.check(x.max() <= vertex_bound(t.size()), name + ": coordinate above 2^(7t-1)");
    r.check(secs < kConeSecondsPerFixture, name + ": " + std::to_string(secs) + " s");
  }
  if (r.pass) r.detail << fx.size() << " fixtures, " << rays_total << " rays, slowest " << worst << "s";
}

void certify(Result& r) {
  for (const char* name : {"solid_torus.tri", "trefoil_complement.tri"}) {
    Triangulation t = support::fixture(name);
    // fixture sanity: a manifold with H1 = Z and one torus boundary
    Homology h = first_homology(t);
    auto bcs = t.boundary_components();
    r.check(h.betti == 1 && h.torsion.empty() && bcs.size() == 1 && bcs[0].euler == 0 && bcs[0].orientable,
            std::string(name) + ": fixture is not a knot exterior");
  }
  Triangulation st = support::fixture("solid_torus.tri");
  auto t0 = std::chrono::steady_clock::now();
  auto u = certify_unknot(st);
  double su = since(t0);
  r.check(u.verdict == Verdict::Unknotted, "solid torus: " + to_string(u.verdict));
  if (u.witness) {
    r.check(u.witness->surface.euler_characteristic == 1, "witness chi != 1");
    std::vector<int> torus_faces;
    for (auto& bc : st.boundary_components())
      if (bc.mark == kPeripheralMark) torus_faces.insert(torus_faces.end(), bc.faces.begin(), bc.faces.end());
    const auto& c = u.witness->boundary_cycle;
    r.check(!trivial_on_boundary(st, c, kPeripheralMark), "witness boundary trivial on the torus");
    r.check(support::pairs_with_some_cocycle(st, torus_faces, c), "torus cocycle oracle finds the boundary trivial");
  } else {
    r.check(false, "no witness disk");
  }
  r.check(su < kCertifySeconds, "solid torus took " + std::to_string(su) + " s");

  t0 = std::chrono::steady_clock::now();
  auto k = certify_unknot(support::fixture("trefoil_complement.tri"));
  double sk = since(t0);
  r.check(k.verdict == Verdict::Knotted, "trefoil: " + to_string(k.verdict));
  r.check(k.scanned == k.rays, "trefoil scan incomplete");
  r.check(sk < kCertifySeconds, "trefoil took " + std::to_string(sk) + " s");
  if (r.pass) r.detail << "UNKNOTTED in " << su << "s, KNOTTED (" << k.rays << " rays) in " << sk << "s";
}

void disk(Result& r) {
  using support::Tri;
  std::mt19937 rng(11);
  long moves = 0;
  for (int trial = 0; trial < kDisks; ++trial) {
    iso::TriangleComplex s = support::random_disk(rng, 1 + static_cast<int>(rng() % kDiskMaxTriangles));
    const int w = static_cast<int>(s.triangles.size());
    const std::string tag = "disk " + std::to_string(trial);
    r.check(w <= kDiskMaxTriangles && support::chi(s.triangles) == 1, tag + ": bad fixture");
    auto d = iso::contract_disk(s);
    moves += d.script.moves.size();
    r.check(static_cast<int>(d.script.moves.size()) <= 2 * w, tag + ": more than 2w moves");
    try {
      iso::replay(s, d.script);
    } catch (const std::exception& e) {
      r.check(false, tag + ": replay failed: " + e.what());
    }
    if (static_cast<int>(d.order.size()) != w || static_cast<int>(d.script.checkpoints.size()) != w) {
      r.check(false, tag + ": wrong number of pieces");
      continue;
    }
    for (int i = 0; i < w; ++i) {
      std::vector<Tri> rest;
      for (int j = i; j < w; ++j) rest.push_back(s.triangles[d.order[j]]);
      r.check(support::chi(rest) == 1, tag + ": intermediate piece set is not a disk");
      r.check(support::cycle_edges(d.script.checkpoints[i].second) == support::free_edges(rest),
              tag + ": curve is not the boundary of the piece set");
    }
  }
  if (r.pass) r.detail << kDisks << " disks, " << moves << " moves";
}

void surface(Result& r) {
  std::mt19937 rng(21);
  int checked = 0, crossing = 0;
  long max_basic = 0;
  for (int n : {3, 4}) {
    iso::TriSurface f = support::grid_torus(n);
    for (int trial = 0; trial < 60; ++trial) {
      auto walk = trial % 2 ? support::column_walk(n, static_cast<int>(rng() % n))
                            : support::row_walk(n, static_cast<int>(rng() % n));
      iso::SurfaceCurve a = support::basic_of(f, walk);
      iso::SurfaceCurve b = support::scramble(f, a, iso::push_off(f, a), rng, 30, kSurfaceMaxLength);
      if (a.length() + b.length() > kSurfaceMaxLength) continue;
      const std::string tag = "n=" + std::to_string(n) + " trial " + std::to_string(trial);
      try {
        auto res = iso::isotope_on_surface(f, a, b);
        ++checked;
        crossing += res.rounds > 0;
        max_basic = std::max(max_basic, res.basic_moves);
        r.check(res.basic_moves <= res.basic_budget, tag + ": basic moves over l^4uV");
        r.check(res.elementary_moves <= res.elementary_budget, tag + ": elementary moves over 17l^4u^3");
        const auto& ri = res.round_intersections;
        r.check(!ri.empty() && ri.front() == iso::intersections(f, a, b) && ri.back() == 0, tag + ": round ledger");
        for (std::size_t i = 1; i < ri.size(); ++i) r.check(ri[i] == ri[i - 1] - 2, tag + ": round did not remove 2");
        iso::replay_surface(f, a, b, res.script);
      } catch (const std::exception& e) {
        r.check(false, tag + ": " + e.what());
      }
    }
  }
  r.check(checked >= 50 && crossing >= 20, "too few informative cases");
  if (r.pass) r.detail << checked << " pairs (" << crossing << " crossing), max basic moves " << max_basic;
}

void twist(Result& r) {
  Triangulation t = support::fixture("solid_torus.tri");
  auto cert = certify_unknot(t);
  if (!cert.witness) {
    r.check(false, "no meridian disk on the fixture");
    return;
  }
  auto lambda = cert.witness->boundary_cycle;
  r.check(trivial_in_manifold(t, lambda), "disk boundary is not a longitude");
  std::vector<int> mu;
  for (int e = 0; e < t.edges() && mu.empty(); ++e) {
    std::vector<int> v(t.edges(), 0);
    v[e] = 1;
    if (!trivial_in_manifold(t, v)) mu = v;
  }
  if (mu.empty()) {
    r.check(false, "no nontrivial edge loop");
    return;
  }
  std::string bound;
  for (int j = -3; j <= 3; ++j) {
    std::vector<int> alpha(t.edges());
    for (int e = 0; e < t.edges(); ++e) alpha[e] = lambda[e] + j * mu[e];
    auto s = iso::twist_count(t, alpha, mu);
    r.check(s.k == -j, "j=" + std::to_string(j) + ": k=" + str(s.k));
    r.check(s.within_bound && abs(s.k) <= s.bound, "j=" + std::to_string(j) + ": outside the bound");
    bound = str(s.bound);
  }
  if (r.pass) r.detail << "k = -j for j in -3..3, bound " << bound;
}

QPoint P(long x, long y, long z) { return {mpq_class(x), mpq_class(y), mpq_class(z)}; }

SpaceLink random_knot(std::mt19937& rng, int n, int box) {
  std::uniform_int_distribution<int> d(-box, box);
  while (true) {
    SpaceLink l;
    l.comps.emplace_back();
    for (int i = 0; i < n; ++i) l.comps[0].push_back(P(d(rng), d(rng), d(rng)));
    if (project(l).regular) return l;
  }
}

void translate(Result& r) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> d(-6, 6);
  int done = 0, attempts = 0;
  long reid = 0;
  for (; attempts < 2000 && done < kTranslateMoves; ++attempts) {
    SpaceLink l = random_knot(rng, 5 + attempts % 3, 6);
    Diagram start = project_diagram(l);
    const int n = static_cast<int>(l.comps[0].size());
    ElementaryMove m = attempts % 2
                           ? ElementaryMove{ElementaryKind::Insert, 0, static_cast<int>(rng() % n), P(d(rng), d(rng), d(rng))}
                           : ElementaryMove{ElementaryKind::Remove, 0, static_cast<int>(rng() % n), {}};
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
    const std::string tag = "move " + std::to_string(done) + " (" + to_string(m) + ")";
    r.check(isomorphic(replay(MoveScript{start, mv}), project_diagram(after)), tag + ": wrong after-diagram");
    r.check(static_cast<long>(mv.size()) <= 2L * l.segments() + 2L * crossing_measure(start), tag + ": over 2|L|+2|D|");
    reid += mv.size();
    ++done;
  }
  r.check(done == kTranslateMoves, "only " + std::to_string(done) + " usable moves");

  // full scripts
  std::mt19937 rs(99);
  for (int s = 0; s < 5; ++s) {
    SpaceLink l = random_knot(rs, 6, 6);
    std::vector<ElementaryMove> script;
    SpaceLink cur = l;
    while (script.size() < 6) {
      const int n = static_cast<int>(cur.comps[0].size());
      ElementaryMove m = (rs() % 2 && n > 4)
                             ? ElementaryMove{ElementaryKind::Remove, 0, static_cast<int>(rs() % n), {}}
                             : ElementaryMove{ElementaryKind::Insert, 0, static_cast<int>(rs() % n), P(d(rs), d(rs), d(rs))};
      try {
        cur = apply_elementary(cur, m);
        script.push_back(m);
      } catch (const InvalidElementaryMove&) {
      }
    }
    try {
      TranslationReport tr = translate_script(l, script);
      const std::string tag = "script " + std::to_string(s);
      r.check(tr.total <= tr.bound, tag + ": over 2k(n+k/2+1)^2");
      r.check(tr.total_ok && tr.step_budgets_ok, tag + ": budget flags");
      r.check(tr.diagram_bound_ok, tag + ": |D_i| > |L_i|^2");
      long sum = 0;
      for (auto& st : tr.steps) {
        sum += st.moves;
        r.check(st.crossing_measure <= static_cast<long>(st.link_size) * st.link_size, tag + ": |D_i| > |L_i|^2");
      }
      r.check(sum == tr.total && sum == static_cast<long>(tr.script.moves.size()), tag + ": ledger mismatch");
      SpaceLink fin = tr.shear == 1 ? cur : shear(cur, tr.shear);
      r.check(isomorphic(replay(tr.script), project_diagram(fin)), tag + ": replay mismatch");
    } catch (const std::exception& e) {
      r.check(false, "script " + std::to_string(s) + ": " + e.what());
    }
  }
  if (r.pass) r.detail << done << " moves -> " << reid << " Reidemeister moves; 5 scripts within budget";
}

// Every knot diagram with at most two crossings, from raw PD labellings.
std::vector<Diagram> small_knot_diagrams() {
  std::map<CanonCode, Diagram> seen;
  seen.emplace(canonical_code(parse_diagram("L[]")), parse_diagram("L[]"));
  for (int n = 1; n <= 2; ++n) {
    std::vector<int> slots(4 * n);
    for (int i = 0; i < 4 * n; ++i) slots[i] = i / 2 + 1;
    do {
      std::string code = "K[ ";
      for (int c = 0; c < n; ++c) {
        code += c ? ", X(" : "X(";
        for (int s = 0; s < 4; ++s) code += (s ? "," : "") + std::to_string(slots[4 * c + s]);
        code += ")";
      }
      code += " ]";
      try {
        Diagram d = parse_diagram(code);
        validate(d);
        if (is_knot(d)) seen.emplace(canonical_code(d), d);
      } catch (const std::exception&) {
      }
    } while (std::next_permutation(slots.begin(), slots.end()));
  }
  std::vector<Diagram> out;
  for (auto& [c, d] : seen) out.push_back(d);
  return out;
}

void reidemeister(Result& r) {
  auto ds = small_knot_diagrams();
  int by_size[3] = {0, 0, 0};
  for (auto& d : ds) {
    ++by_size[d.crossings()];
    BfsLimits lim;
    lim.max_depth = kUntangleDepth;
    auto s = bfs_untangle(d, lim);
    r.check(s.has_value(), serialize(d) + ": not untangled within depth 4");
    if (s) r.check(is_trivial(replay(MoveScript{d, *s})), serialize(d) + ": script does not reach the loop");
  }
  r.check(by_size[1] > 0 && by_size[2] > 0, "enumeration missed a crossing count");

  std::mt19937 rng(11);
  Diagram d = parse_diagram("K[ X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8) ]");
  for (int i = 0; i < kRoundTrips; ++i) {
    auto ms = all_moves(d);
    const Move& m = ms[rng() % ms.size()];
    auto res = apply_move(d, m);
    r.check(isomorphic(apply_move(res.diagram, res.inverse).diagram, d), "round trip failed: " + to_string(m));
    d = res.diagram.crossings() > 9 ? d : res.diagram;
  }
  if (r.pass)
    r.detail << ds.size() << " diagrams (" << by_size[0] << "/" << by_size[1] << "/" << by_size[2]
             << " by crossings) untangled; " << kRoundTrips << " round trips";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Result&)>>> all{
      {"embed", embed},         {"matching", matching}, {"cone", cone},
      {"certify", certify},     {"disk", disk},         {"surface", surface},
      {"twist", twist},         {"translate", translate}, {"reidemeister", reidemeister},
  };
  std::vector<std::string> want(argv + 1, argv + argc);
  bool ok = true;
  for (auto& [name, fn] : all) {
    if (!want.empty() && std::find(want.begin(), want.end(), name) == want.end()) continue;
    Result r;
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (r.pass ? "PASS " : "FAIL ") << name << ": " << r.detail.str() << std::endl;
    ok &= r.pass;
  }
  for (auto& w : want)
    if (std::none_of(all.begin(), all.end(), [&](auto& p) { return p.first == w; })) {
      std::cout << "FAIL " << w << ": unknown criterion" << std::endl;
      ok = false;
    }
  return ok ? 0 : 1;
}
