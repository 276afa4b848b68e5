#include "km/diagram.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace km {

namespace {

// Removes crossings and joins the loose ends straight through them. Closed
// strands that lived only on removed crossings become isolated loops.
Diagram splice_out(const Diagram& d, const std::vector<int>& removed) {
  const int v = d.crossings();
  std::vector<char> gone(v, 0);
  for (int c : removed) gone[c] = 1;
  std::vector<int> newid(v, -1);
  int k = 0;
  for (int c = 0; c < v; ++c)
    if (!gone[c]) newid[c] = k++;
  std::vector<char> used(d.darts(), 0);
  std::vector<int> mate(4 * k, -1);
  for (int c = 0; c < v; ++c) {
    if (gone[c]) continue;
    for (int s = 0; s < 4; ++s) {
      int m = d.mate(dart(c, s));
      while (gone[dart_crossing(m)]) {
        used[m] = 1;
        int o = dart_turn(m, 2);
        used[o] = 1;
        m = d.mate(o);
      }
      mate[dart(newid[c], s)] = dart(newid[dart_crossing(m)], dart_slot(m));
    }
  }
  int loops = d.loops();
  for (int c : removed)
    for (int s = 0; s < 4; ++s) {
      int x = dart(c, s);
      if (used[x]) continue;
      ++loops;
      do {
        used[x] = 1;
        int m = d.mate(x);
        used[m] = 1;
        x = dart_turn(m, 2);
      } while (!used[x]);
    }
  return Diagram(std::move(mate), loops);
}

int find_face_of(const Diagram& d, int dt) { return d.face_of(dt); }

Move face_move(MoveKind k, const Diagram& d, int dt) {
  Move m;
  m.kind = k;
  m.face = find_face_of(d, dt);
  return m;
}

const std::vector<int>& face_at(const Diagram& d, const Move& m, std::size_t len_min = 1) {
  if (m.face < 0 || m.face >= static_cast<int>(d.faces().size()))
    throw MoveMismatch("face " + std::to_string(m.face) + " does not exist");
  const auto& f = d.faces()[m.face];
  if (f.size() < len_min) throw MoveMismatch("face too short");
  return f;
}

Diagram r1_plus(const Diagram& d, const Move& m, int& monogon_dart) {
  std::vector<int> mate = d.mates();
  int x = d.crossings();
  mate.resize(mate.size() + 4);
  int p = m.sign > 0 ? 0 : 1;
  auto set = [&](int a, int b) {
    mate[a] = b;
    mate[b] = a;
  };
  int loops = d.loops();
  if (m.face < 0) {
    if (m.loop < 0 || m.loop >= d.loops()) throw MoveMismatch("no such isolated loop");
    --loops;
    set(dart(x, p + 2), dart(x, p + 3));
    set(dart(x, p + 1), dart(x, p));
  } else {
    const auto& f = face_at(d, m);
    if (m.arcs.size() != 1 || m.arcs[0] < 0 || m.arcs[0] >= static_cast<int>(f.size()))
      throw MoveMismatch("R1+ needs one arc of the face");
    int a = f[m.arcs[0]], b = d.mate(a);
    set(a, dart(x, p));
    set(dart(x, p + 2), dart(x, p + 3));
    set(dart(x, p + 1), b);
  }
  monogon_dart = dart(x, p + 2);
  return Diagram(std::move(mate), loops);
}

Diagram r1_minus(const Diagram& d, const Move& m) {
  const auto& f = face_at(d, m);
  if (f.size() != 1) throw MoveMismatch("R1- needs a 1-gon face");
  return splice_out(d, {dart_crossing(f[0])});
}

bool same_piece(const Diagram& d, int a, int b) {
  for (const auto& c : d.graph_components())
    if (std::count(c.begin(), c.end(), dart_crossing(a))) return std::count(c.begin(), c.end(), dart_crossing(b)) > 0;
  return false;
}

Diagram r2_plus(const Diagram& d, const Move& m, int& bigon_dart) {
  std::vector<int> mate = d.mates();
  int x = d.crossings(), y = x + 1;
  mate.resize(mate.size() + 8);
  int r = m.over ? 0 : 1;
  auto sl = [r](int c, int base) { return dart(c, base - r); };
  auto set = [&](int a, int b) {
    mate[a] = b;
    mate[b] = a;
  };
  int loops = d.loops();
  auto take_loop = [&](int l) {
    if (l < 0 || l >= d.loops()) throw MoveMismatch("no such isolated loop");
    --loops;
  };
  // strand 1 runs y3 -> y1 -> x1 -> x3, strand 2 runs x0 -> x2 -> y0 -> y2
  if (m.face < 0) {
    take_loop(m.loop);
    if (m.arcs.empty()) {
      set(sl(y, 3), sl(y, 2));
      set(sl(x, 3), sl(x, 0));
    } else {
      // two loops, one pushed across the other
      if (m.arcs.size() != 1 || m.arcs[0] == m.loop) throw MoveMismatch("R2+ needs two different loops");
      take_loop(m.arcs[0]);
      set(sl(x, 3), sl(y, 3));
      set(sl(y, 2), sl(x, 0));
    }
    set(sl(y, 1), sl(x, 1));
    set(sl(x, 2), sl(y, 0));
  } else {
    const auto& f = face_at(d, m);
    for (std::size_t k = 0; k < m.arcs.size(); ++k)
      if (m.arcs[k] < 0 || (m.arcs[k] >= static_cast<int>(f.size()) && (k == 0 || m.other_face < 0)))
        throw MoveMismatch("R2+ arc out of range");
    if (m.loop >= 0) {
      // a loop pushed across an arc of the face
      if (m.arcs.size() != 1) throw MoveMismatch("R2+ with a loop needs one arc");
      take_loop(m.loop);
      int a2 = f[m.arcs[0]], b2 = d.mate(a2);
      set(sl(x, 3), sl(y, 3));
      set(sl(y, 1), sl(x, 1));
      set(a2, sl(x, 0));
      set(sl(x, 2), sl(y, 0));
      set(sl(y, 2), b2);
    } else if (m.other_face < 0 && m.arcs.size() == 2 && m.arcs[0] == m.arcs[1]) {
      // an arc pushed across itself: under through y and x, a curl at x, back over
      int p = f[m.arcs[0]], a = d.mate(p);
      set(a, sl(y, 0));
      set(sl(y, 2), sl(x, 0));
      set(sl(x, 2), sl(x, 3));
      set(sl(x, 1), sl(y, 1));
      set(sl(y, 3), p);
      bigon_dart = sl(x, 0);
      return Diagram(std::move(mate), loops);
    } else {
      if (m.arcs.size() != 2) throw MoveMismatch("R2+ needs two arcs");
      const auto& g = m.other_face < 0 ? f : face_at(d, Move{MoveKind::R2Plus, m.other_face, -1, {}});
      if (m.arcs[1] >= static_cast<int>(g.size())) throw MoveMismatch("R2+ arc out of range");
      int a1 = f[m.arcs[0]], a2 = g[m.arcs[1]];
      if (m.other_face >= 0 && same_piece(d, a1, a2)) throw MoveMismatch("R2+ faces lie on the same piece");
      if (d.mate(a1) == a2) throw MoveMismatch("R2+ arcs lie on the same edge");
      int b1 = d.mate(a1), b2 = d.mate(a2);
      set(a1, sl(y, 3));
      set(sl(y, 1), sl(x, 1));
      set(sl(x, 3), b1);
      set(a2, sl(x, 0));
      set(sl(x, 2), sl(y, 0));
      set(sl(y, 2), b2);
    }
  }
  bigon_dart = sl(x, 1);
  return Diagram(std::move(mate), loops);
}

bool r2_minus_ok(const Diagram& d, const std::vector<int>& f) {
  if (f.size() != 2) return false;
  int p = f[0], q = d.mate(p);
  int x = dart_crossing(p), y = dart_crossing(q);
  return x != y && ((dart_slot(p) ^ dart_slot(q)) & 1) == 0;
}

Diagram r2_minus(const Diagram& d, const Move& m) {
  const auto& f = face_at(d, m);
  if (!r2_minus_ok(d, f)) throw MoveMismatch("R2- needs a bigon with one strand over both crossings");
  return splice_out(d, {dart_crossing(f[0]), dart_crossing(f[1])});
}

struct Tri {
  int x, a, y, b, z, c;
};

bool r3_site(const Diagram& d, const std::vector<int>& f, Tri& t) {
  if (f.size() != 3) return false;
  int p0 = f[0], p1 = f[1], p2 = f[2];
  t.x = dart_crossing(p0);
  t.a = dart_slot(p0);
  t.y = dart_crossing(p1);
  t.b = (dart_slot(p1) + 1) & 3;
  t.z = dart_crossing(p2);
  t.c = (dart_slot(p2) + 1) & 3;
  if (t.x == t.y || t.y == t.z || t.z == t.x) return false;
  if (d.mate(p0) != dart(t.y, t.b) || d.mate(p1) != dart(t.z, t.c) || d.mate(p2) != dart(t.x, t.a + 1))
    return false;
  auto odd = [](int s) { return (s & 1) != 0; };
  bool xy = odd(t.a) && odd(t.b);
  bool yz = odd(t.b + 3) && odd(t.c);
  bool zx = odd(t.c + 3) && odd(t.a + 1);
  return xy || yz || zx;
}

Diagram r3(const Diagram& d, const Move& m, int& tri_dart) {
  const auto& f = face_at(d, m);
  Tri t;
  if (!r3_site(d, f, t)) throw MoveMismatch("R3 needs a triangle with a strand over both its crossings");
  const int x = t.x, y = t.y, z = t.z, a = t.a, b = t.b, c = t.c;
  std::unordered_map<int, int> stub = {
      {dart(x, a + 2), dart(y, b)},     {dart(y, b + 2), dart(x, a)},
      {dart(y, b + 1), dart(z, c)},     {dart(z, c + 2), dart(y, b + 3)},
      {dart(z, c + 1), dart(x, a + 1)}, {dart(x, a + 3), dart(z, c + 3)},
  };
  auto mapd = [&](int q) {
    auto it = stub.find(q);
    return it == stub.end() ? q : it->second;
  };
  std::vector<int> mate = d.mates();
  for (const auto& [u, target] : stub) {
    int w = d.mate(u);
    mate[target] = mapd(w);
    mate[mapd(w)] = target;
  }
  auto set = [&](int p, int q) {
    mate[p] = q;
    mate[q] = p;
  };
  set(dart(y, b + 2), dart(x, a + 2));
  set(dart(z, c + 2), dart(y, b + 1));
  set(dart(x, a + 3), dart(z, c + 1));
  tri_dart = dart(x, a + 2);
  return Diagram(std::move(mate), d.loops());
}

Diagram apply_raw(const Diagram& d, const Move& m, int& marker) {
  marker = -1;
  switch (m.kind) {
    case MoveKind::R1Plus: return r1_plus(d, m, marker);
    case MoveKind::R1Minus: return r1_minus(d, m);
    case MoveKind::R2Plus: return r2_plus(d, m, marker);
    case MoveKind::R2Minus: return r2_minus(d, m);
    case MoveKind::R3: return r3(d, m, marker);
  }
  throw MoveMismatch("unknown move kind");
}

std::vector<Move> raising_moves(const Diagram& d, MoveKind only, bool filter) {
  std::vector<Move> out;
  const auto& faces = d.faces();
  if (!filter || only == MoveKind::R1Plus) {
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
      for (int i = 0; i < static_cast<int>(faces[fi].size()); ++i)
        for (int sg : {+1, -1}) out.push_back(Move{MoveKind::R1Plus, fi, -1, {i}, sg, true});
    if (d.loops() > 0)
      for (int sg : {+1, -1}) out.push_back(Move{MoveKind::R1Plus, -1, 0, {}, sg, true});
  }
  if (!filter || only == MoveKind::R2Plus) {
    for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
      const auto& f = faces[fi];
      for (int i = 0; i < static_cast<int>(f.size()); ++i)
        for (int j = i + 1; j < static_cast<int>(f.size()); ++j) {
          if (d.mate(f[i]) == f[j]) continue;
          for (bool ov : {true, false}) out.push_back(Move{MoveKind::R2Plus, fi, -1, {i, j}, 1, ov});
        }
      for (int i = 0; i < static_cast<int>(f.size()); ++i)
        for (bool ov : {true, false}) {
          out.push_back(Move{MoveKind::R2Plus, fi, -1, {i, i}, 1, ov});
          if (d.loops() > 0) out.push_back(Move{MoveKind::R2Plus, fi, 0, {i}, 1, ov});
        }
    }
    auto pieces = d.graph_components();
    if (pieces.size() > 1) {
      std::vector<int> piece(d.crossings(), -1);
      for (int k = 0; k < static_cast<int>(pieces.size()); ++k)
        for (int c : pieces[k]) piece[c] = k;
      for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi)
        for (int fj = fi + 1; fj < static_cast<int>(faces.size()); ++fj) {
          if (piece[dart_crossing(faces[fi][0])] == piece[dart_crossing(faces[fj][0])]) continue;
          for (int i = 0; i < static_cast<int>(faces[fi].size()); ++i)
            for (int j = 0; j < static_cast<int>(faces[fj].size()); ++j)
              for (bool ov : {true, false}) {
                Move m{MoveKind::R2Plus, fi, -1, {i, j}, 1, ov};
                m.other_face = fj;
                out.push_back(m);
              }
        }
    }
    for (bool ov : {true, false}) {
      if (d.loops() > 0) out.push_back(Move{MoveKind::R2Plus, -1, 0, {}, 1, ov});
      if (d.loops() > 1) out.push_back(Move{MoveKind::R2Plus, -1, 0, {1}, 1, ov});
    }
  }
  return out;
}

}  // namespace

std::vector<Move> reducing_moves(const Diagram& d) {
  std::vector<Move> out;
  const auto& faces = d.faces();
  for (int fi = 0; fi < static_cast<int>(faces.size()); ++fi) {
    const auto& f = faces[fi];
    Tri t;
    if (f.size() == 1) out.push_back(Move{MoveKind::R1Minus, fi, -1, {}, 1, true});
    if (r2_minus_ok(d, f)) out.push_back(Move{MoveKind::R2Minus, fi, -1, {}, 1, true});
    if (r3_site(d, f, t)) out.push_back(Move{MoveKind::R3, fi, -1, {}, 1, true});
  }
  return out;
}

std::vector<Move> all_moves(const Diagram& d) {
  auto out = reducing_moves(d);
  auto up = raising_moves(d, MoveKind::R1Plus, false);
  out.insert(out.end(), up.begin(), up.end());
  return out;
}

MoveResult apply_move(const Diagram& d, const Move& m) {
  int marker = -1;
  Diagram r = apply_raw(d, m, marker);
  Move inv;
  switch (m.kind) {
    case MoveKind::R1Plus: inv = face_move(MoveKind::R1Minus, r, marker); break;
    case MoveKind::R2Plus: inv = face_move(MoveKind::R2Minus, r, marker); break;
    case MoveKind::R3: inv = face_move(MoveKind::R3, r, marker); break;
    case MoveKind::R1Minus:
    case MoveKind::R2Minus: {
      MoveKind want = m.kind == MoveKind::R1Minus ? MoveKind::R1Plus : MoveKind::R2Plus;
      auto target = canonical_code(d);
      bool found = false;
      for (const Move& c : raising_moves(r, want, true)) {
        int mk;
        if (canonical_code(apply_raw(r, c, mk)) == target) {
          inv = c;
          found = true;
          break;
        }
      }
      if (!found) throw MoveMismatch("internal: no inverse found for " + to_string(m) + " giving " + serialize_raw(r));
      break;
    }
  }
  return {std::move(r), inv};
}

// ---------------------------------------------------------------- text forms

std::string to_string(const Move& m) {
  std::ostringstream os;
  switch (m.kind) {
    case MoveKind::R1Plus: os << "R1+"; break;
    case MoveKind::R1Minus: os << "R1-"; break;
    case MoveKind::R2Plus: os << "R2+"; break;
    case MoveKind::R2Minus: os << "R2-"; break;
    case MoveKind::R3: os << "R3"; break;
  }
  if (m.face >= 0) os << " @face:" << m.face;
  if (m.face < 0 || (m.kind == MoveKind::R2Plus && m.loop >= 0)) os << " @loop:" << m.loop;
  if (m.kind == MoveKind::R1Plus) {
    if (m.face >= 0) os << " arc:" << m.arcs.at(0);
    os << " sign:" << (m.sign > 0 ? '+' : '-');
  }
  if (m.kind == MoveKind::R2Plus) {
    if (m.face < 0 && !m.arcs.empty())
      os << " with:" << m.arcs[0];
    else if (m.face >= 0 && m.loop >= 0)
      os << " arc:" << m.arcs.at(0);
    else if (m.face >= 0)
      os << " arcs:" << m.arcs.at(0) << "," << m.arcs.at(1);
    if (m.other_face >= 0) os << " other:" << m.other_face;
    os << " push:" << (m.over ? "over" : "under");
  }
  return os.str();
}

Move parse_move(const std::string& line) {
  std::istringstream is(line);
  std::string kind, tok;
  is >> kind;
  Move m;
  if (kind == "R1+") m.kind = MoveKind::R1Plus;
  else if (kind == "R1-") m.kind = MoveKind::R1Minus;
  else if (kind == "R2+") m.kind = MoveKind::R2Plus;
  else if (kind == "R2-") m.kind = MoveKind::R2Minus;
  else if (kind == "R3") m.kind = MoveKind::R3;
  else throw DiagramSyntaxError("unknown move '" + kind + "'");
  auto num = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw DiagramSyntaxError("bad number '" + s + "'");
    return std::stoi(s);
  };
  while (is >> tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw DiagramSyntaxError("bad move field '" + tok + "'");
    std::string key = tok.substr(0, colon), val = tok.substr(colon + 1);
    if (key == "@face") m.face = num(val);
    else if (key == "@loop") m.loop = num(val);
    else if (key == "other") m.other_face = num(val);
    else if (key == "arc" || key == "with") m.arcs = {num(val)};
    else if (key == "arcs") {
      auto comma = val.find(',');
      if (comma == std::string::npos) throw DiagramSyntaxError("arcs needs two values");
      m.arcs = {num(val.substr(0, comma)), num(val.substr(comma + 1))};
    } else if (key == "sign") {
      if (val != "+" && val != "-") throw DiagramSyntaxError("sign must be + or -");
      m.sign = val == "+" ? 1 : -1;
    } else if (key == "push") {
      if (val != "over" && val != "under") throw DiagramSyntaxError("push must be over or under");
      m.over = val == "over";
    } else {
      throw DiagramSyntaxError("unknown move field '" + key + "'");
    }
  }
  if (m.face < 0 && m.loop < 0) throw DiagramSyntaxError("move without location");
  return m;
}

std::string write_script(const MoveScript& s, int every) {
  std::ostringstream os;
  os << "start " << serialize_raw(s.start) << "\n";
  Diagram cur = s.start;
  for (std::size_t i = 0; i < s.moves.size(); ++i) {
    os << to_string(s.moves[i]) << "\n";
    int mk;
    cur = apply_raw(cur, s.moves[i], mk);
    if (every > 0 && (i + 1) % every == 0) os << "checkpoint " << serialize_raw(cur) << "\n";
  }
  return os.str();
}

namespace {
struct ScriptLine {
  bool checkpoint;
  Move move;
  Diagram diagram;
};
}  // namespace

static std::vector<ScriptLine> script_lines(const std::string& text, Diagram& start) {
  std::istringstream is(text);
  std::string line;
  bool have_start = false;
  std::vector<ScriptLine> out;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("start ", 0) == 0) {
      start = parse_diagram(line.substr(6));
      have_start = true;
    } else if (line.rfind("checkpoint ", 0) == 0) {
      out.push_back({true, {}, parse_diagram(line.substr(11))});
    } else {
      out.push_back({false, parse_move(line), {}});
    }
  }
  if (!have_start) throw DiagramSyntaxError("script has no start line");
  return out;
}

MoveScript read_script(const std::string& text) {
  MoveScript s;
  Diagram cur;
  bool started = false;
  for (auto& l : script_lines(text, s.start)) {
    if (!started) {
      cur = s.start;
      started = true;
    }
    int mk;
    if (l.checkpoint) {
      if (!(cur == l.diagram)) throw MoveMismatch("checkpoint mismatch");
    } else {
      cur = apply_raw(cur, l.move, mk);
      s.moves.push_back(l.move);
    }
  }
  return s;
}

Diagram replay(const MoveScript& s) {
  Diagram cur = s.start;
  for (const auto& m : s.moves) {
    int mk;
    cur = apply_raw(cur, m, mk);
  }
  return cur;
}

// ---------------------------------------------------------------- search

namespace {

struct CodeHash {
  std::size_t operator()(const CanonCode& c) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : c) h = (h ^ static_cast<std::size_t>(x + 7)) * 1099511628211ull;
    return h;
  }
};

template <class Goal>
std::optional<std::vector<Move>> bfs(const Diagram& start, const BfsLimits& lim, Goal goal) {
  struct Node {
    Diagram d;
    int parent;
    Move via;
    int depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<CanonCode, int, CodeHash> seen;
  nodes.push_back({start, -1, {}, 0});
  seen.emplace(canonical_code(start), 0);
  auto path_to = [&](int i) {
    std::vector<Move> p;
    for (; nodes[i].parent >= 0; i = nodes[i].parent) p.push_back(nodes[i].via);
    std::reverse(p.begin(), p.end());
    return p;
  };
  if (goal(start)) return std::vector<Move>{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].depth >= lim.max_depth) continue;
    Diagram cur = nodes[i].d;
    int depth = nodes[i].depth;
    for (const Move& m : all_moves(cur)) {
      int extra = m.kind == MoveKind::R1Plus ? 1 : m.kind == MoveKind::R2Plus ? 2 : 0;
      if (cur.crossings() + extra > lim.max_crossings) continue;
      int mk;
      Diagram nd = apply_raw(cur, m, mk);
      auto code = canonical_code(nd);
      if (seen.count(code)) continue;
      if (nodes.size() >= lim.max_states)
        throw SearchLimitExceeded("search exceeded " + std::to_string(lim.max_states) + " states");
      int id = static_cast<int>(nodes.size());
      seen.emplace(std::move(code), id);
      bool hit = goal(nd);
      nodes.push_back({std::move(nd), static_cast<int>(i), m, depth + 1});
      if (hit) return path_to(id);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Move>> bfs_untangle(const Diagram& d, const BfsLimits& lim) {
  if (!is_knot(d)) throw DiagramValidityError("bfs_untangle needs a knot diagram");
  return bfs(d, lim, [](const Diagram& x) { return is_trivial(x); });
}

std::optional<std::vector<Move>> bfs_connect(const Diagram& a, const Diagram& b, const BfsLimits& lim) {
  auto target = canonical_code(b);
  return bfs(a, lim, [&](const Diagram& x) { return canonical_code(x) == target; });
}

}  // namespace km
