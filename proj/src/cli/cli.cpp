#include "km/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "km/complex.hpp"
#include "km/diagram.hpp"
#include "km/embed.hpp"
#include "km/normalsurf.hpp"

namespace km::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kC2 = 1e7;  // elementary-move exponent per tetrahedron

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json base_report(const std::string& command, const std::string& path) {
  return json{{"schema", kSchema}, {"command", command}, {"input", path}};
}

Outcome input_error(json r, const std::string& what) {
  r["status"] = "INPUT_ERROR";
  r["error"] = what;
  return Outcome{kInputError, "error: " + what, std::move(r), ""};
}

// Runs f, mapping library input errors to exit code 3.
template <class F>
Outcome guarded(json r, F&& f) {
  try {
    return f(r);
  } catch (const InputError& e) {
    return input_error(std::move(r), e.what());
  } catch (const DiagramSyntaxError& e) {
    return input_error(std::move(r), e.what());
  } catch (const DiagramValidityError& e) {
    return input_error(std::move(r), e.what());
  } catch (const TriangulationError& e) {
    return input_error(std::move(r), e.what());
  } catch (const EmbedError& e) {
    return input_error(std::move(r), e.what());
  }
}

// log2(2^a + 2^b)
double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  return a + std::log2(1 + std::exp2(b - a));
}

json bound(const std::string& name, const std::string& formula, double log2_value) {
  json b{{"name", name}, {"formula", formula}, {"log2", log2_value}};
  if (log2_value < 62) b["value"] = std::llround(std::exp2(log2_value));
  return b;
}

// Budget chain for an n-crossing diagram whose polytope has t tetrahedra.
// The complement has at most 576t tetrahedra; its quantities feed the later bounds.
json budget_ledger(int n, long t) {
  json l = json::array();
  double tc = 576.0 * t;
  l.push_back(bound("polytope_tets", "840n", std::log2(840.0 * std::max(n, 1))));
  l.push_back(bound("complement_tets", "576t", std::log2(tc)));
  l.push_back(bound("disk_triangles", "2^(8t'+6)", 8 * tc + 6));
  l.push_back(bound("disk_contraction", "2w", 8 * tc + 7));
  json iso = bound("surface_isotopy", "17 l^4 u^3", 0);
  iso.erase("log2");
  iso.erase("value");
  iso["note"] = "instantiated per boundary curve pair; l and u are measured when the isotopy runs";
  l.push_back(iso);
  // k elementary moves on a link of at most 6*840n segments.
  double log_k = kC2 * t;
  double log_segments = std::log2(6.0 * 840.0 * std::max(n, 1));
  double log_inner = log_add(log_add(log_k - 1, log_segments), 0);
  l.push_back(bound("elementary_moves", "2^(c2 t), c2 = 1e7", log_k));
  l.push_back(bound("reidemeister_moves", "2k(|L|+k/2+1)^2", 1 + log_k + 2 * log_inner));
  return l;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

UnknotCertificate certify_or_guard(const Triangulation& t, const Options& o) {
  return certify_unknot(t, EnumLimits{o.max_dim});
}

json certificate_json(const UnknotCertificate& c) { return json::parse(c.json()); }

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Unknotted: return kOk;
    case Verdict::Knotted: return kKnotted;
    case Verdict::Indeterminate: return kIndeterminate;
  }
  return kIndeterminate;
}

}  // namespace

void validate_report(const json& r) {
  auto need = [&](const json& obj, const char* key, json::value_t type) {
    if (!obj.is_object() || !obj.contains(key)) throw std::logic_error(std::string("report lacks ") + key);
    const json& v = obj.at(key);
    bool ok = v.type() == type || (type == json::value_t::number_integer && v.is_number_integer()) ||
              (type == json::value_t::number_float && v.is_number());
    if (!ok) throw std::logic_error(std::string("report field ") + key + " has the wrong type");
  };
  using T = json::value_t;
  need(r, "schema", T::string);
  if (r["schema"] != kSchema) throw std::logic_error("unknown report schema");
  need(r, "command", T::string);
  if (r.contains("error")) {
    need(r, "error", T::string);
    return;
  }
  const std::string c = r["command"];
  if (c == "validate") {
    need(r, "kind", T::string);
    need(r, "status", T::string);
  } else if (c == "build") {
    need(r, "t", T::number_integer);
    need(r, "m", T::number_integer);
    need(r, "certificate", T::object);
  } else if (c == "certify") {
    need(r, "verdict", T::string);
    need(r, "mode", T::string);
  } else if (c == "moves") {
    need(r, "status", T::string);
    need(r, "limits", T::object);
    need(r, "budget", T::object);
  } else if (c == "report") {
    need(r, "input", T::object);
    for (const char* k : {"n", "L", "t"}) need(r["input"], k, T::number_integer);
    need(r, "stages", T::object);
    need(r, "budgets", T::array);
    for (const auto& b : r["budgets"]) {
      need(b, "name", T::string);
      need(b, "formula", T::string);
    }
    need(r, "verdict", T::string);
    need(r, "timings", T::object);
  } else {
    throw std::logic_error("unknown command " + c);
  }
}

InputKind detect_input(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto p = line.find_first_not_of(" \t\r");
    if (p == std::string::npos || line[p] == '#') continue;
    if (line.compare(p, 2, "K[") == 0 || line.compare(p, 2, "L[") == 0) return InputKind::Diagram;
    if (line.compare(p, 5, "tets=") == 0) return InputKind::Triangulation;
    throw InputError("unrecognised input: expected a diagram (K[...] or L[...]) or a triangulation (tets=...)");
  }
  throw InputError("empty input");
}

Outcome cmd_validate(const std::string& path, const Options&) {
  return guarded(base_report("validate", path), [&](json& r) {
    std::string text = slurp(path);
    if (detect_input(text) == InputKind::Diagram) {
      Diagram d = parse_diagram(text);
      validate(d);
      int n = d.crossings();
      r["kind"] = "diagram";
      r["n"] = n;
      r["components"] = link_components(d);
      r["knot"] = is_knot(d);
      r["trivial"] = is_trivial(d);
      r["crossing_measure"] = crossing_measure(d);
      r["canonical"] = serialize(d);
      r["status"] = "OK";
      return Outcome{kOk, "OK diagram n=" + std::to_string(n), r, ""};
    }
    Triangulation t = read_triangulation(text);
    t.check_manifold();
    auto knot = read_knot(text);
    for (const auto& k : knot) check_curve(t, k);
    r["kind"] = "triangulation";
    r["t"] = t.size();
    r["vertices"] = t.vertices();
    r["edges"] = t.edges();
    r["faces"] = t.faces();
    json bd = json::array();
    for (const auto& b : t.boundary_components())
      bd.push_back({{"mark", b.mark}, {"faces", b.faces.size()}, {"euler", b.euler}, {"orientable", b.orientable}});
    r["boundary"] = bd;
    r["knot_components"] = knot.size();
    r["status"] = "OK";
    return Outcome{kOk, "OK triangulation t=" + std::to_string(t.size()), r, ""};
  });
}

Outcome cmd_build(const std::string& path, const Options& o) {
  return guarded(base_report("build", path), [&](json& r) {
    auto t0 = Clock::now();
    Diagram d = parse_diagram(slurp(path));
    validate(d);
    EmbeddedComplement ec = build_complement_input(d);
    std::string artifact = write_triangulation(ec.polytope) + write_knot(ec.knot);
    if (!o.out.empty()) write_text(o.out, artifact);
    r["certificate"] = json::parse(ec.certificate());
    r["n"] = ec.n;
    r["m"] = ec.m;
    r["t"] = ec.polytope.size();
    r["ok"] = ec.tet_bound_ok && ec.box_ok && ec.interior_ok && ec.convex_ok && ec.projection_ok;
    r["seconds"] = seconds_since(t0);
    r["status"] = "OK";
    std::ostringstream s;
    s << "OK built t=" << ec.polytope.size() << " (840n=" << 840 * ec.n << ")";
    return Outcome{kOk, s.str(), r, artifact};
  });
}

Outcome cmd_certify(const std::string& path, const Options& o) {
  return guarded(base_report("certify", path), [&](json& r) {
    auto t0 = Clock::now();
    std::string text = slurp(path);
    Triangulation t = read_triangulation(text);
    t.check_manifold();
    auto knot = read_knot(o.knot.empty() ? text : slurp(o.knot));
    r["t"] = t.size();
    r["max_dim"] = o.max_dim;

    Triangulation target;
    if (knot.empty()) {
      target = std::move(t);
      r["mode"] = "complement";
    } else {
      if (knot.size() != 1) throw InputError("certify expects a single knot component");
      check_curve(t, knot[0]);
      r["mode"] = "knot";
      // The truncated complement of the second subdivision has at most 576t tetrahedra;
      // refuse before building it when that already overruns the guard.
      long upper = 576L * t.size();
      if (7 * upper > o.max_dim) {
        r["verdict"] = "INDETERMINATE";
        r["note"] = "complement of up to " + std::to_string(upper) + " tetrahedra exceeds --max-dim " +
                    std::to_string(o.max_dim);
        r["seconds"] = seconds_since(t0);
        return Outcome{kIndeterminate, "INDETERMINATE (guard)", r, ""};
      }
      SubdivisionMap m1, m2;
      Triangulation s1 = barycentric_subdivide(t, &m1);
      PLCurve k1 = subdivide_curve(t, m1, knot[0]);
      Triangulation s2 = barycentric_subdivide(s1, &m2);
      PLCurve k2 = subdivide_curve(s1, m2, k1);
      Complement c = truncated_complement(s2, regular_neighborhood(s2, k2));
      target = std::move(c.tri);
    }
    r["complement_tets"] = target.size();
    UnknotCertificate c = certify_or_guard(target, o);
    r["certificate"] = certificate_json(c);
    r["verdict"] = to_string(c.verdict);
    r["seconds"] = seconds_since(t0);
    return Outcome{verdict_code(c.verdict), to_string(c.verdict), r, ""};
  });
}

Outcome cmd_moves(const std::string& path, const Options& o) {
  return guarded(base_report("moves", path), [&](json& r) {
    auto t0 = Clock::now();
    Diagram d = parse_diagram(slurp(path));
    validate(d);
    if (!is_knot(d)) throw InputError("moves expects a knot diagram");
    int n = d.crossings();
    r["n"] = n;
    r["limits"] = {{"max_crossings", o.max_crossings}, {"max_depth", o.max_depth}};
    r["budget"] = bound("reidemeister_moves", "2^(c1 n), c1 = 1e11", 1e11 * n);
    std::optional<std::vector<Move>> found;
    try {
      found = bfs_untangle(d, BfsLimits{o.max_crossings, o.max_depth});
    } catch (const SearchLimitExceeded& e) {
      r["status"] = "INDETERMINATE";
      r["note"] = e.what();
      r["seconds"] = seconds_since(t0);
      return Outcome{kIndeterminate, "INDETERMINATE (state limit)", r, ""};
    }
    r["seconds"] = seconds_since(t0);
    if (!found) {
      r["status"] = "EXHAUSTED";
      r["note"] = "no untangling within the crossing and depth limits";
      return Outcome{kIndeterminate, "EXHAUSTED search space", r, ""};
    }
    std::string script = write_script(MoveScript{d, *found});
    if (!o.out.empty()) write_text(o.out, script);
    // The stored script must reproduce the trivial diagram.
    bool replayed = is_trivial(replay(read_script(script)));
    r["moves"] = found->size();
    r["replayed"] = replayed;
    r["status"] = replayed ? "OK" : "REPLAY_FAILED";
    return Outcome{replayed ? kOk : kIndeterminate, "OK " + std::to_string(found->size()) + " moves", r, script};
  });
}

Outcome cmd_report(const std::string& path, const Options& o) {
  return guarded(base_report("report", path), [&](json& r) {
    auto t0 = Clock::now();
    Diagram d = parse_diagram(slurp(path));
    validate(d);
    int n = d.crossings();
    json stages = json::object();
    json timings = json::object();

    auto tb = Clock::now();
    EmbeddedComplement ec = build_complement_input(d);
    long t = ec.polytope.size();
    int segments = ec.link.segments();
    timings["build"] = seconds_since(tb);
    stages["build"] = {{"t", t}, {"m", ec.m}, {"tet_bound_ok", ec.tet_bound_ok}, {"projection_ok", ec.projection_ok}};
    r["input"] = {{"path", path}, {"n", n}, {"L", segments}, {"t", t}};

    std::string verdict = "INDETERMINATE";
    int code = kIndeterminate;
    long upper = 576L * t;
    if (!is_knot(d)) {
      stages["certify"] = {{"status", "SKIPPED"}, {"note", "not a knot"}};
    } else if (upper > o.max_subdivided || 7 * upper > o.max_dim) {
      stages["certify"] = {{"status", "SKIPPED"},
                           {"note", "complement of up to " + std::to_string(upper) +
                                        " tetrahedra exceeds the guards"}};
    } else {
      auto tc = Clock::now();
      SubdivisionMap m1, m2;
      Triangulation s1 = barycentric_subdivide(ec.polytope, &m1);
      PLCurve k1 = subdivide_curve(ec.polytope, m1, ec.knot[0]);
      Triangulation s2 = barycentric_subdivide(s1, &m2);
      PLCurve k2 = subdivide_curve(s1, m2, k1);
      Complement c = truncated_complement(s2, regular_neighborhood(s2, k2));
      UnknotCertificate cert = certify_or_guard(c.tri, o);
      timings["certify"] = seconds_since(tc);
      stages["certify"] = {{"status", to_string(cert.verdict)}, {"complement_tets", c.tri.size()}};
      verdict = to_string(cert.verdict);
      code = verdict_code(cert.verdict);
    }

    if (is_knot(d) && n <= o.max_crossings) {
      auto tm = Clock::now();
      try {
        auto found = bfs_untangle(d, BfsLimits{o.max_crossings, o.max_depth});
        if (found) {
          stages["moves"] = {{"status", "OK"}, {"moves", found->size()}};
          verdict = "UNKNOTTED";
          code = kOk;
        } else {
          stages["moves"] = {{"status", "EXHAUSTED"}};
        }
      } catch (const SearchLimitExceeded& e) {
        stages["moves"] = {{"status", "INDETERMINATE"}, {"note", e.what()}};
      }
      timings["moves"] = seconds_since(tm);
    } else {
      stages["moves"] = {{"status", "SKIPPED"}};
    }

    r["stages"] = stages;
    r["budgets"] = budget_ledger(n, t);
    r["verdict"] = verdict;
    timings["total"] = seconds_since(t0);
    r["timings"] = timings;
    return Outcome{code, verdict + " n=" + std::to_string(n) + " t=" + std::to_string(t), r, ""};
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"knot diagram and normal surface toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Options o;
  std::string input, json_path;
  app.add_option("--max-dim", o.max_dim, "normal coordinate guard (7t)");
  app.add_option("--max-crossings", o.max_crossings, "Reidemeister search crossing limit");
  app.add_option("--max-depth", o.max_depth, "Reidemeister search depth limit");
  app.add_option("--seed", o.seed, "seed for fixture generation");
  app.add_option("--json", json_path, "write the JSON report here ('-' for stdout)");

  struct Sub {
    const char* name;
    const char* help;
    Outcome (*fn)(const std::string&, const Options&);
  };
  const Sub subs[] = {
      {"validate", "parse and validate a diagram or triangulation", cmd_validate},
      {"build", "triangulated polytope containing the diagram's knot", cmd_build},
      {"certify", "decide unknottedness by normal surfaces", cmd_certify},
      {"moves", "Reidemeister script by bounded search", cmd_moves},
      {"report", "pipeline stages and bound ledger", cmd_report},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* a = app.add_subcommand(s.name, s.help);
    a->add_option("input", input, "input file")->required();
    if (std::string(s.name) == "build" || std::string(s.name) == "moves")
      a->add_option("-o,--out", o.out, "output file");
    if (std::string(s.name) == "certify") a->add_option("--knot", o.knot, "knot file");
    apps.push_back(a);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o1, o2;
    int rc = app.exit(e, o1, o2);
    out << o1.str();
    err << o2.str();
    return rc == 0 ? kOk : kInputError;
  }

  Outcome res;
  for (std::size_t i = 0; i < apps.size(); ++i)
    if (apps[i]->parsed()) res = subs[i].fn(input, o);
  res.report["seed"] = o.seed;
  validate_report(res.report);

  (res.exit_code == kInputError ? err : out) << res.summary << "\n";
  if (!res.artifact.empty() && o.out.empty() && json_path != "-") out << res.artifact;
  if (json_path == "-") {
    out << res.report.dump(2) << "\n";
  } else if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) {
      err << "error: cannot write " << json_path << "\n";
      return kInputError;
    }
    f << res.report.dump(2) << "\n";
  }
  return res.exit_code;
}

}  // namespace km::cli
