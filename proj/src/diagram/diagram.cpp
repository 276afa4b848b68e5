#include "km/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace km {

Diagram::Diagram(std::vector<int> mate, int loops) : mate_(std::move(mate)), loops_(loops) {
  if (mate_.size() % 4 != 0) throw DiagramValidityError("dart count not a multiple of 4");
  if (loops_ < 0) throw DiagramValidityError("negative loop count");
  const int n = static_cast<int>(mate_.size());
  for (int d = 0; d < n; ++d) {
    int m = mate_[d];
    if (m < 0 || m >= n || m == d || mate_[m] != d)
      throw DiagramValidityError("edge pairing is not an involution at dart " + std::to_string(d));
  }
}

void Diagram::build_faces() const {
  const int n = darts();
  face_of_.assign(n, -1);
  faces_.clear();
  for (int d = 0; d < n; ++d) {
    if (face_of_[d] >= 0) continue;
    std::vector<int> cyc;
    int e = d;
    do {
      face_of_[e] = static_cast<int>(faces_.size());
      cyc.push_back(e);
      e = dart_turn(mate_[e], 3);
    } while (e != d);
    faces_.push_back(std::move(cyc));
  }
  faces_ready_ = true;
}

const std::vector<std::vector<int>>& Diagram::faces() const {
  if (!faces_ready_) build_faces();
  return faces_;
}

int Diagram::face_of(int d) const {
  if (!faces_ready_) build_faces();
  return face_of_[d];
}

std::vector<std::vector<int>> Diagram::graph_components() const {
  const int v = crossings();
  std::vector<int> comp(v, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < v; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s}, members;
    comp[s] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      members.push_back(c);
      for (int k = 0; k < 4; ++k) {
        int o = dart_crossing(mate_[4 * c + k]);
        if (comp[o] < 0) {
          comp[o] = comp[s];
          stack.push_back(o);
        }
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

void validate(const Diagram& d) {
  if (d.crossings() == 0 && d.loops() == 0) throw DiagramValidityError("empty diagram");
  // Euler check per component: V - E + F = 2 with E = 2V.
  const auto& faces = d.faces();
  for (const auto& comp : d.graph_components()) {
    std::vector<char> in(d.crossings(), 0);
    for (int c : comp) in[c] = 1;
    int f = 0;
    for (const auto& face : faces)
      if (in[dart_crossing(face.front())]) ++f;
    int v = static_cast<int>(comp.size());
    if (v - 2 * v + f != 2)
      throw DiagramValidityError("rotation system is not planar (component at crossing " +
                                 std::to_string(comp.front()) + ")");
  }
}

// ---------------------------------------------------------------- parsing

namespace {

struct Lexer {
  const std::string& s;
  std::size_t i = 0;
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c)
      throw DiagramSyntaxError(std::string("expected '") + c + "' at offset " + std::to_string(i));
    ++i;
  }
  bool accept(char c) {
    if (peek(c)) {
      ++i;
      return true;
    }
    return false;
  }
  long number() {
    ws();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) throw DiagramSyntaxError("expected number at offset " + std::to_string(i));
    if (j - i > 9) throw DiagramSyntaxError("number too long at offset " + std::to_string(i));
    long v = std::stol(s.substr(i, j - i));
    i = j;
    return v;
  }
  bool keyword(const std::string& k) {
    ws();
    if (s.compare(i, k.size(), k) == 0) {
      i += k.size();
      return true;
    }
    return false;
  }
};

}  // namespace

Diagram parse_diagram(const std::string& text) {
  Lexer lx{text};
  lx.ws();
  if (!(lx.accept('K') || lx.accept('L'))) throw DiagramSyntaxError("diagram must start with K[ or L[");
  lx.expect('[');
  std::vector<long> ids;  // 4 per crossing, counterclockwise from an under end
  bool loops_given = false;
  long loops = 0;
  if (!lx.peek(']') && !lx.peek(';')) {
    while (true) {
      lx.ws();
      if (lx.accept('X')) {
        lx.expect('(');
        for (int k = 0; k < 4; ++k) {
          if (k) lx.expect(',');
          ids.push_back(lx.number());
        }
        lx.expect(')');
      } else if (lx.accept('V')) {
        lx.expect('(');
        long e[4];
        char lab[4];
        for (int k = 0; k < 4; ++k) {
          if (k) lx.expect(',');
          e[k] = lx.number();
          lx.expect(':');
          lx.ws();
          if (lx.i >= text.size() || (text[lx.i] != 'o' && text[lx.i] != 'u'))
            throw DiagramSyntaxError("expected label o or u at offset " + std::to_string(lx.i));
          lab[k] = text[lx.i++];
        }
        lx.expect(')');
        for (int k = 0; k < 4; ++k)
          if (lab[k] == lab[(k + 1) % 4])
            throw DiagramValidityError("crossing " + std::to_string(ids.size() / 4) +
                                       ": over and under ends must alternate");
        int r = lab[0] == 'u' ? 0 : 1;
        for (int k = 0; k < 4; ++k) ids.push_back(e[(k + r) % 4]);
      } else {
        throw DiagramSyntaxError("expected X( or V( at offset " + std::to_string(lx.i));
      }
      if (!lx.accept(',')) break;
    }
  }
  if (lx.accept(';')) {
    if (!lx.keyword("loops")) throw DiagramSyntaxError("expected loops= after ';'");
    lx.expect('=');
    loops = lx.number();
    loops_given = true;
  }
  lx.expect(']');
  lx.ws();
  if (lx.i != text.size()) throw DiagramSyntaxError("trailing characters at offset " + std::to_string(lx.i));

  if (!loops_given && ids.empty()) loops = 1;
  std::map<long, std::vector<int>> where;
  for (int d = 0; d < static_cast<int>(ids.size()); ++d) where[ids[d]].push_back(d);
  std::vector<int> mate(ids.size(), -1);
  for (const auto& [id, ds] : where) {
    if (ds.size() != 2)
      throw DiagramValidityError("edge " + std::to_string(id) + " has " + std::to_string(ds.size()) +
                                 " ends, expected 2");
    mate[ds[0]] = ds[1];
    mate[ds[1]] = ds[0];
  }
  Diagram d(std::move(mate), static_cast<int>(loops));
  validate(d);
  return d;
}

std::string serialize_raw(const Diagram& d) {
  std::vector<int> edge(d.darts(), 0);
  int next = 1;
  for (int x = 0; x < d.darts(); ++x)
    if (x < d.mate(x)) edge[x] = edge[d.mate(x)] = next++;
  std::ostringstream os;
  os << (is_knot(d) ? "K[" : "L[");
  for (int c = 0; c < d.crossings(); ++c) {
    os << (c ? ", " : " ") << "X(";
    for (int s = 0; s < 4; ++s) os << (s ? "," : "") << edge[dart(c, s)];
    os << ")";
  }
  os << " ; loops=" << d.loops() << " ]";
  return os.str();
}

std::string serialize(const Diagram& d) { return serialize_raw(canonical(d)); }

// ---------------------------------------------------------------- statistics

std::vector<Strand> strands(const Diagram& d) {
  std::vector<char> seen(d.darts(), 0);
  std::vector<Strand> out;
  for (int s = 0; s < d.darts(); ++s) {
    if (seen[s]) continue;
    Strand st;
    int x = s;
    do {
      seen[x] = 1;
      st.out_darts.push_back(x);
      int m = d.mate(x);
      seen[m] = 1;
      x = dart_turn(m, 2);
    } while (x != s);
    out.push_back(std::move(st));
  }
  return out;
}

int link_components(const Diagram& d) { return static_cast<int>(strands(d).size()) + d.loops(); }

int crossing_measure(const Diagram& d) {
  return d.crossings() + static_cast<int>(d.graph_components().size()) + d.loops() - 1;
}

bool is_trivial(const Diagram& d) { return d.crossings() == 0 && d.loops() == 1; }

bool is_knot(const Diagram& d) { return link_components(d) == 1; }

int crossing_sign(const Diagram& d, int c, const std::vector<int>& orientation) {
  auto st = strands(d);
  std::vector<int> dir(d.darts(), 0);  // +1 if the dart is an exit in the chosen direction
  for (std::size_t i = 0; i < st.size(); ++i) {
    int o = i < orientation.size() ? orientation[i] : 1;
    for (int x : st[i].out_darts) {
      dir[x] = o;
      dir[d.mate(x)] = -o;
    }
  }
  // incoming ends are those through which the strand arrives
  int a = dir[dart(c, 0)] < 0 ? 0 : 2;
  int b = dir[dart(c, 1)] < 0 ? 1 : 3;
  return b == (a + 3) % 4 ? +1 : -1;
}

int writhe(const Diagram& d, const std::vector<int>& orientation) {
  if (!is_knot(d)) throw DiagramValidityError("writhe needs a one-component diagram");
  int w = 0;
  for (int c = 0; c < d.crossings(); ++c) w += crossing_sign(d, c, orientation);
  return w;
}

// ---------------------------------------------------------------- canonical form

namespace {

// Traversal from root crossing with slot offset; fills order/offset and code.
void rooted_code(const Diagram& d, int root, int off0, std::vector<int>& code,
                 std::vector<int>& order, std::vector<int>& newid, std::vector<int>& off) {
  std::fill(newid.begin(), newid.end(), -1);
  order.clear();
  code.clear();
  newid[root] = 0;
  off[root] = off0;
  order.push_back(root);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int c = order[i];
    for (int j = 0; j < 4; ++j) {
      int m = d.mate(dart(c, j + off[c]));
      int c2 = dart_crossing(m);
      if (newid[c2] < 0) {
        newid[c2] = static_cast<int>(order.size());
        off[c2] = dart_slot(m) & ~1;
        order.push_back(c2);
      }
      code.push_back(4 * newid[c2] + ((dart_slot(m) - off[c2]) & 3));
    }
  }
}

struct ComponentCanon {
  std::vector<int> code;
  int root = 0, off = 0;
};

ComponentCanon best_root(const Diagram& d, const std::vector<int>& comp) {
  std::vector<int> code, order, newid(d.crossings(), -1), off(d.crossings(), 0);
  ComponentCanon best;
  bool have = false;
  for (int c : comp)
    for (int o = 0; o < 4; o += 2) {
      rooted_code(d, c, o, code, order, newid, off);
      if (!have || code < best.code) {
        best.code = code;
        best.root = c;
        best.off = o;
        have = true;
      }
    }
  return best;
}

}  // namespace

CanonCode canonical_code(const Diagram& d) {
  std::vector<std::vector<int>> codes;
  for (const auto& comp : d.graph_components()) codes.push_back(best_root(d, comp).code);
  std::sort(codes.begin(), codes.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  CanonCode out;
  for (const auto& c : codes) {
    out.push_back(static_cast<int>(c.size()));
    out.insert(out.end(), c.begin(), c.end());
  }
  out.push_back(-1 - d.loops());
  return out;
}

bool isomorphic(const Diagram& a, const Diagram& b) {
  return a.crossings() == b.crossings() && a.loops() == b.loops() &&
         canonical_code(a) == canonical_code(b);
}

Diagram canonical(const Diagram& d) {
  std::vector<ComponentCanon> cs;
  for (const auto& comp : d.graph_components()) cs.push_back(best_root(d, comp));
  std::sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) {
    return a.code.size() != b.code.size() ? a.code.size() < b.code.size() : a.code < b.code;
  });
  std::vector<int> mate;
  for (const auto& c : cs) {
    int base = static_cast<int>(mate.size()) / 4;
    for (int x : c.code) mate.push_back(x + 4 * base);
  }
  return Diagram(std::move(mate), d.loops());
}

}  // namespace km
