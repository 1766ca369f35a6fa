#pragma once

// Site-addressed Yoshikawa moves and a seeded random walk over them.
//
// Site text form: `<id> <fwd|rev> key=value ...`, for example
//   O1 fwd edge=5 side=0 chir=1     kink on edge 5, attached toward its first incidence
//   O1 fwd loop=1 chir=-1           kink on a crossing-free circle
//   O2 fwd n1=0 s1=2 n2=3 s2=1 over=0
//   O3 fwd n=2 s=1                  triangle face through dart (2,1)
//   O5 fwd v=4 j=1                  bigon on slots j, j+1 of vertex 4
//   O7 rev edge=9
//   O8 fwd node=5 rot=0 mirror=0

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mgd/diagram.hpp"

namespace mgd {

enum class MoveId { O1, O2, O3, O4, O4p, O5, O6, O6p, O7, O8 };
enum class Direction { fwd, rev };

inline constexpr std::array<MoveId, 10> kAllMoves{MoveId::O1, MoveId::O2,  MoveId::O3, MoveId::O4, MoveId::O4p,
                                                  MoveId::O5, MoveId::O6, MoveId::O6p, MoveId::O7, MoveId::O8};

inline std::string to_string(MoveId m) {
  static const char* names[] = {"O1", "O2", "O3", "O4", "O4p", "O5", "O6", "O6p", "O7", "O8"};
  return names[static_cast<int>(m)];
}

inline std::optional<MoveId> move_from_string(std::string s) {
  if (!s.empty() && s[0] == 'o') s[0] = 'O';
  if (!s.empty() && s.back() == '\'') s.back() = 'p';
  for (MoveId m : kAllMoves)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

class PatternMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonPlanarResult : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class Stuck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MoveSite {
  MoveId id = MoveId::O1;
  Direction dir = Direction::fwd;
  std::vector<std::pair<std::string, int>> args;

  bool has(const std::string& k) const {
    return std::any_of(args.begin(), args.end(), [&](const auto& a) { return a.first == k; });
  }
  int get(const std::string& k) const {
    for (const auto& [key, v] : args)
      if (key == k) return v;
    throw PatternMismatch(to_string(id) + " site is missing '" + k + "'");
  }

  std::string str() const {
    std::string s = to_string(id) + (dir == Direction::fwd ? " fwd" : " rev");
    for (const auto& [k, v] : args) s += " " + k + "=" + std::to_string(v);
    return s;
  }

  static MoveSite parse(const std::string& text) {
    std::istringstream in(text);
    std::string id, dir, kv;
    if (!(in >> id >> dir)) throw std::invalid_argument("site: expected '<move> <fwd|rev> ...'");
    auto m = move_from_string(id);
    if (!m) throw std::invalid_argument("site: unknown move '" + id + "'");
    MoveSite s;
    s.id = *m;
    if (dir == "fwd")
      s.dir = Direction::fwd;
    else if (dir == "rev")
      s.dir = Direction::rev;
    else
      throw std::invalid_argument("site: direction must be fwd or rev");
    while (in >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("site: bad argument '" + kv + "'");
      try {
        std::size_t used = 0;
        int v = std::stoi(kv.substr(eq + 1), &used);
        if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        s.args.emplace_back(kv.substr(0, eq), v);
      } catch (const std::logic_error&) {
        throw std::invalid_argument("site: bad argument '" + kv + "'");
      }
    }
    return s;
  }

  friend bool operator==(const MoveSite&, const MoveSite&) = default;
};

struct MoveResult {
  MarkedGraphDiagram diagram;
  MoveSite inverse;
};

namespace detail {

inline MoveSite make_site(MoveId id, Direction dir, std::vector<std::pair<std::string, int>> args) {
  return MoveSite{id, dir, std::move(args)};
}

// Smallest labels not in `used`.
class FreshLabels {
 public:
  explicit FreshLabels(std::set<EdgeLabel> used) : used_(std::move(used)) {}
  EdgeLabel next() {
    while (used_.count(next_)) ++next_;
    used_.insert(next_);
    return next_;
  }

 private:
  std::set<EdgeLabel> used_;
  EdgeLabel next_ = 1;
};

inline void check_node(const MarkedGraphDiagram& d, int n) {
  if (n < 0 || n >= d.node_count()) throw PatternMismatch("node " + std::to_string(n) + " out of range");
}

inline void check_slot(int s) {
  if (s < 0 || s > 3) throw PatternMismatch("slot " + std::to_string(s) + " out of range");
}

// Index of `n` once the (sorted, unique) nodes in `removed` are deleted.
inline int shifted_index(const MarkedGraphDiagram& d, const std::vector<int>& removed, int n) {
  (void)d;
  return n - static_cast<int>(std::count_if(removed.begin(), removed.end(), [&](int r) { return r < n; }));
}

// Deletes `nodes`, joining the opposite slots of each (0-2 and 1-3). Merged edges keep
// their smallest surviving label; closed-up strands become free loops.
inline MarkedGraphDiagram splice_out(const MarkedGraphDiagram& d, std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::set<int> gone(nodes.begin(), nodes.end());

  std::map<EdgeLabel, std::size_t> id;
  for (int n : nodes)
    for (EdgeLabel e : d.ends(n)) id.emplace(e, id.size());
  UnionFind uf(id.size());
  for (int n : nodes) {
    const Ends& e = d.ends(n);
    uf.unite(id[e[0]], id[e[2]]);
    uf.unite(id[e[1]], id[e[3]]);
  }

  std::map<std::size_t, EdgeLabel> rep;  // class root -> smallest surviving label
  for (int n = 0; n < d.node_count(); ++n) {
    if (gone.count(n)) continue;
    for (EdgeLabel e : d.ends(n)) {
      auto it = id.find(e);
      if (it == id.end()) continue;
      std::size_t r = uf.find(it->second);
      auto [pos, ins] = rep.try_emplace(r, e);
      if (!ins) pos->second = std::min(pos->second, e);
    }
  }

  MarkedGraphDiagram r;
  r.free_loops = d.free_loops;
  std::set<std::size_t> closed;
  for (const auto& [e, i] : id)
    if (!rep.count(uf.find(i))) closed.insert(uf.find(i));
  r.free_loops += static_cast<int>(closed.size());

  auto relabel = [&](Ends e) {
    for (EdgeLabel& x : e) {
      auto it = id.find(x);
      if (it != id.end()) x = rep.at(uf.find(it->second));
    }
    return e;
  };
  for (int n = 0; n < d.node_count(); ++n) {
    if (gone.count(n)) continue;
    if (d.is_vertex(n))
      r.vertices.push_back({relabel(d.ends(n))});
    else
      r.crossings.push_back({relabel(d.ends(n))});
  }
  return r;
}

inline void assert_valid(const MarkedGraphDiagram& d, const MoveSite& s) {
  auto v = validate(d);
  if (!v.empty()) throw NonPlanarResult(s.str() + " produced an invalid diagram: " + v.front().kind + " " + v.front().detail);
}

}  // namespace detail


// ---------------------------------------------------------------------------
// Local rewrites. Each checks its pattern and throws PatternMismatch; none validates
// the result (apply() does).

namespace detail {

inline Ends rotated(const Ends& e, int by) { return {e[mod4(by)], e[mod4(by + 1)], e[mod4(by + 2)], e[mod4(by + 3)]}; }

inline bool curl_vertex(MoveId id) { return id == MoveId::O6 || id == MoveId::O6p; }

// Kink (O1) or marked curl (O6, O6p): the loop sits on slots p, p+1 of the new node.
inline MoveResult curl_insert(const MarkedGraphDiagram& d, const MoveSite& s) {
  int p = 0;
  if (s.id == MoveId::O1) {
    int chir = s.get("chir");
    if (chir != 1 && chir != -1) throw PatternMismatch("chir must be 1 or -1");
    p = chir == 1 ? 0 : 3;
  } else {
    p = s.id == MoveId::O6 ? 0 : 3;
  }
  MarkedGraphDiagram r = d;
  LabelPool pool(d);
  Ends n{};
  if (s.has("loop")) {
    if (d.free_loops == 0) throw PatternMismatch("no free loop to curl");
    EdgeLabel k = pool.fresh(), e = pool.fresh();
    n[p] = n[mod4(p + 1)] = k;
    n[mod4(p + 2)] = n[mod4(p + 3)] = e;
    --r.free_loops;
  } else {
    EdgeLabel e = s.get("edge");
    int side = s.get("side");
    if (side != 0 && side != 1) throw PatternMismatch("side must be 0 or 1");
    EdgeIndex idx(d);
    if (!idx.all().count(e)) throw PatternMismatch("no edge " + std::to_string(e));
    Incidence far = idx.incidences(e)[1 - side];
    EdgeLabel k = pool.fresh(), f = pool.fresh();
    r.ends(far.node)[far.slot] = f;
    n[p] = n[mod4(p + 1)] = k;
    n[mod4(p + 2)] = e;
    n[mod4(p + 3)] = f;
  }
  int node = 0;
  if (curl_vertex(s.id)) {
    r.vertices.push_back({n});
    node = r.node_count() - 1;
  } else {
    r.crossings.push_back({n});
    node = static_cast<int>(r.crossings.size()) - 1;
  }
  return {std::move(r), make_site(s.id, Direction::rev, {{"node", node}})};
}

// Slot p of the removable loop at `node`, or nullopt.
inline std::optional<int> curl_slot(const MarkedGraphDiagram& d, MoveId id, int node) {
  if (d.is_vertex(node) != curl_vertex(id)) return std::nullopt;
  const Ends& e = d.ends(node);
  for (int p = 0; p < 4; ++p) {
    if (e[p] != e[mod4(p + 1)]) continue;
    if (id == MoveId::O6 && p % 2 != 0) continue;
    if (id == MoveId::O6p && p % 2 != 1) continue;
    return p;
  }
  return std::nullopt;
}

inline MoveResult curl_remove(const MarkedGraphDiagram& d, const MoveSite& s) {
  int node = s.get("node");
  check_node(d, node);
  auto p = curl_slot(d, s.id, node);
  if (!p) throw PatternMismatch(s.str() + ": no curl at node");
  const Ends& n = d.ends(node);
  EdgeLabel e = n[mod4(*p + 2)], f = n[mod4(*p + 3)];
  std::vector<std::pair<std::string, int>> args;
  MarkedGraphDiagram r = splice_out(d, {node});
  if (e == f) {
    args.emplace_back("loop", 1);
  } else {
    EdgeIndex idx(d);
    Incidence a = idx.other_end(d, {node, mod4(*p + 2)});
    a.node = shifted_index(d, {node}, a.node);
    EdgeLabel merged = r.ends(a.node)[a.slot];
    EdgeIndex ridx(r);
    args.emplace_back("edge", merged);
    args.emplace_back("side", ridx.incidences(merged)[0] == a ? 0 : 1);
  }
  if (s.id == MoveId::O1) args.emplace_back("chir", *p % 2 == 0 ? 1 : -1);
  return {std::move(r), make_site(s.id, Direction::fwd, std::move(args))};
}

inline std::vector<Incidence> face_of(const MarkedGraphDiagram& d, const EdgeIndex& idx, Incidence start) {
  std::vector<Incidence> f;
  Incidence cur = start;
  do {
    f.push_back(cur);
    cur = face_next(d, idx, cur);
  } while (!(cur == start) && f.size() <= 4u * d.node_count());
  return f;
}

// Finger move: the strand leaving dart 1 is pushed across the strand leaving dart 2
// through the face on their right. Darts in different components may be paired
// freely (the format does not record how components nest); `loop2=1` takes a free
// loop as the second strand, `loop1=1 loop2=1` clasps two free loops.
inline MoveResult finger_insert(const MarkedGraphDiagram& d, const MoveSite& s) {
  bool l1 = s.has("loop1"), l2 = s.has("loop2");
  if (l1 && !l2) throw PatternMismatch("loop1 requires loop2");
  int over = s.get("over");
  if (over != 0 && over != 1) throw PatternMismatch("over must be 0 or 1");
  EdgeIndex idx(d);
  LabelPool pool(d);
  MarkedGraphDiagram r = d;
  if (s.has("loop")) {
    // A free loop with one stretch pushed across a later one.
    if (d.free_loops < 1) throw PatternMismatch(s.str() + ": no free loop");
    --r.free_loops;
    EdgeLabel a1 = pool.fresh(), a2 = pool.fresh(), a3 = pool.fresh(), b2 = pool.fresh();
    EdgeLabel b1 = a3, b3 = a1;
    if (over == 0) {
      r.crossings.push_back({{a2, b2, a1, b3}});
      r.crossings.push_back({{a2, b1, a3, b2}});
    } else {
      r.crossings.push_back({{b2, a1, b3, a2}});
      r.crossings.push_back({{b1, a3, b2, a2}});
    }
    int q = static_cast<int>(r.crossings.size()) - 1;
    return {std::move(r), make_site(MoveId::O2, Direction::rev, {{"n1", q - 1}, {"n2", q}})};
  }
  if (d.free_loops < int{l1} + int{l2}) throw PatternMismatch(s.str() + ": not enough free loops");
  r.free_loops -= int{l1} + int{l2};

  // a1 -> a2 -> a3 along the first strand, b1 -> b2 -> b3 along the second.
  EdgeLabel a1, a2, a3, b1, b2, b3;
  auto take_dart = [&](const char* nk, const char* sk, EdgeLabel& x1, EdgeLabel& x3) {
    Incidence t{s.get(nk), s.get(sk)};
    check_node(d, t.node);
    check_slot(t.slot);
    x1 = d.ends(t.node)[t.slot];
    x3 = pool.fresh();
    return t;
  };
  std::optional<Incidence> d1, d2;
  if (l1) {
    a1 = a3 = pool.fresh();
  } else {
    d1 = take_dart("n1", "s1", a1, a3);
  }
  a2 = pool.fresh();
  if (l2) {
    b1 = b3 = pool.fresh();
  } else {
    d2 = take_dart("n2", "s2", b1, b3);
  }
  b2 = pool.fresh();
  bool same_dart = false;
  if (d1 && d2) {
    same_dart = *d1 == *d2;
    // Both sides of an edge never share a face in a 4-valent diagram, so distinct darts
    // on one edge are rejected by the face test.
    auto comp = node_components(d);
    auto face = face_of(d, idx, *d1);
    if (comp[d1->node] == comp[d2->node] && std::find(face.begin(), face.end(), *d2) == face.end())
      throw PatternMismatch(s.str() + ": darts not on a common face");
    if (!same_dart && a1 == b1) throw PatternMismatch(s.str() + ": darts on the same edge");
  }
  if (same_dart) {
    // An earlier stretch of the edge pushed across a later one: a3 runs into b1.
    b1 = a3;
    Incidence h = idx.other_end(d, *d1);
    r.ends(h.node)[h.slot] = b3;
  } else {
    if (d1) {
      Incidence h = idx.other_end(d, *d1);
      r.ends(h.node)[h.slot] = a3;
    }
    if (d2) {
      Incidence h = idx.other_end(d, *d2);
      r.ends(h.node)[h.slot] = b3;
    }
  }
  if (over == 0) {
    r.crossings.push_back({{a2, b2, a1, b3}});
    r.crossings.push_back({{a2, b1, a3, b2}});
  } else {
    r.crossings.push_back({{b2, a1, b3, a2}});
    r.crossings.push_back({{b1, a3, b2, a2}});
  }
  int q = static_cast<int>(r.crossings.size()) - 1;
  return {std::move(r), make_site(MoveId::O2, Direction::rev, {{"n1", q - 1}, {"n2", q}})};
}

// A bigon between crossings p and q with one edge over at both ends and the other under.
inline bool clasp_bigon(const MarkedGraphDiagram& d, int p, int q) {
  if (p == q || d.is_vertex(p) || d.is_vertex(q)) return false;
  EdgeIndex idx(d);
  for (int s = 0; s < 4; ++s) {
    Incidence x{p, s};
    Incidence y = face_next(d, idx, x);
    if (y.node != q || !(face_next(d, idx, y) == x)) continue;
    if ((x.slot - y.slot) % 2 != 0) return true;
  }
  return false;
}

inline MoveResult finger_remove(const MarkedGraphDiagram& d, const MoveSite& s) {
  int p = s.get("n1"), q = s.get("n2");
  check_node(d, p);
  check_node(d, q);
  if (!clasp_bigon(d, p, q)) throw PatternMismatch(s.str() + ": no removable bigon");
  return {splice_out(d, {p, q}), {}};
}

struct Triangle {
  std::array<int, 3> node;
  std::array<int, 3> arrive;  // slot at node[k] of the edge from node[k-1]
};

inline std::optional<Triangle> triangle_at(const MarkedGraphDiagram& d, const EdgeIndex& idx, Incidence dart) {
  auto f = face_of(d, idx, dart);
  if (f.size() != 3) return std::nullopt;
  Triangle t;
  for (int k = 0; k < 3; ++k) {
    t.node[k] = f[k].node;
    t.arrive[k] = mod4(f[k].slot - 1);
  }
  if (t.node[0] == t.node[1] || t.node[1] == t.node[2] || t.node[0] == t.node[2]) return std::nullopt;
  return t;
}

// Which triangle move the face admits, if any. At node k the strand arriving from
// node k-1 is over iff its slot is even.
inline std::optional<MoveId> triangle_kind(const MarkedGraphDiagram& d, const Triangle& t) {
  int vertices = 0, v = -1;
  for (int k = 0; k < 3; ++k)
    if (d.is_vertex(t.node[k])) ++vertices, v = k;
  if (vertices == 0) {
    bool o0 = t.arrive[0] % 2 == 0, o1 = t.arrive[1] % 2 == 0, o2 = t.arrive[2] % 2 == 0;
    if (o0 == o1 && o1 == o2) return std::nullopt;  // cyclic: no strand over both others
    return MoveId::O3;
  }
  if (vertices != 1) return std::nullopt;
  int k1 = (v + 1) % 3, k2 = (v + 2) % 3;
  bool over1 = t.arrive[k1] % 2 == 1;  // the free strand leaves k1 through arrive+1
  bool over2 = t.arrive[k2] % 2 == 0;  // and enters k2 through arrive
  if (over1 && over2) return MoveId::O4;
  if (!over1 && !over2) return MoveId::O4p;
  return std::nullopt;
}

inline MoveResult triangle_flip(const MarkedGraphDiagram& d, const MoveSite& s) {
  Incidence dart{s.get("n"), s.get("s")};
  check_node(d, dart.node);
  check_slot(dart.slot);
  EdgeIndex idx(d);
  auto t = triangle_at(d, idx, dart);
  if (!t || triangle_kind(d, *t) != s.id) throw PatternMismatch(s.str() + ": face does not match");
  MarkedGraphDiagram r = d;
  auto at = [&](const MarkedGraphDiagram& g, int k, int off) -> const EdgeLabel& {
    return g.ends(t->node[k])[mod4(t->arrive[k] + off)];
  };
  auto set = [&](int k, int off, EdgeLabel e) { r.ends(t->node[k])[mod4(t->arrive[k] + off)] = e; };
  for (int k = 0; k < 3; ++k) {
    int k1 = (k + 1) % 3;
    set(k1, 0, at(d, k, 3));
    set(k, 1, at(d, k1, 2));
    set(k, 3, at(d, k, 1));
    set(k1, 2, at(d, k, 1));
  }
  Direction back = s.dir == Direction::fwd ? Direction::rev : Direction::fwd;
  return {std::move(r), make_site(s.id, back, {{"n", t->node[0]}, {"s", mod4(t->arrive[0] + 3)}})};
}

// Crossing adjacent to a vertex along slots j (odd) and j+1; returns X and the slot q of V[j] at X.
inline std::optional<std::pair<int, int>> vertex_bigon(const MarkedGraphDiagram& d, int v, int j) {
  if (!d.is_vertex(v) || j % 2 != 1) return std::nullopt;
  EdgeIndex idx(d);
  const Ends& e = d.ends(v);
  if (e[j] == e[mod4(j + 1)]) return std::nullopt;
  Incidence ti = idx.other_end(d, {v, j}), bi = idx.other_end(d, {v, mod4(j + 1)});
  if (d.is_vertex(ti.node) || bi.node != ti.node || bi.slot != mod4(ti.slot - 1)) return std::nullopt;
  return std::make_pair(ti.node, ti.slot);
}

inline MoveResult vertex_pass(const MarkedGraphDiagram& d, const MoveSite& s) {
  int v = s.get("v"), j = s.get("j");
  check_node(d, v);
  check_slot(j);
  auto xb = vertex_bigon(d, v, j);
  if (!xb) throw PatternMismatch(s.str() + ": no vertex-crossing bigon");
  auto [x, q] = *xb;
  const Ends e = d.ends(v), xe = d.ends(x);
  EdgeLabel t = e[j], b = e[mod4(j + 1)];
  MarkedGraphDiagram r = d;
  Ends& nv = r.ends(v);
  nv[j] = xe[mod4(q + 1)];
  nv[mod4(j + 1)] = xe[mod4(q + 2)];
  nv[mod4(j + 2)] = b;
  nv[mod4(j + 3)] = t;
  r.ends(x) = q % 2 == 0 ? Ends{e[mod4(j + 3)], t, b, e[mod4(j + 2)]} : Ends{t, b, e[mod4(j + 2)], e[mod4(j + 3)]};
  Direction back = s.dir == Direction::fwd ? Direction::rev : Direction::fwd;
  return {std::move(r), make_site(MoveId::O5, back, {{"v", v}, {"j", mod4(j + 2)}})};
}

// Vertices joined by edge m, at an odd slot of the first and an even slot of the second.
inline std::optional<std::pair<Incidence, Incidence>> vertex_pair(const MarkedGraphDiagram& d, EdgeLabel m) {
  EdgeIndex idx(d);
  if (!idx.all().count(m)) return std::nullopt;
  auto inc = idx.incidences(m);
  for (int flip = 0; flip < 2; ++flip) {
    Incidence a = inc[flip], b = inc[1 - flip];
    if (a.node != b.node && d.is_vertex(a.node) && d.is_vertex(b.node) && a.slot % 2 == 1 && b.slot % 2 == 0)
      return std::make_pair(a, b);
  }
  return std::nullopt;
}

inline MoveResult vertex_slide(const MarkedGraphDiagram& d, const MoveSite& s) {
  EdgeLabel m = s.get("edge");
  auto ab = vertex_pair(d, m);
  if (!ab) throw PatternMismatch(s.str() + ": edge does not join two vertices as required");
  auto [ia, ib] = *ab;
  MarkedGraphDiagram r = d;
  const Ends a = rotated(d.ends(ia.node), ia.slot), b = rotated(d.ends(ib.node), ib.slot);
  Ends& na = r.ends(ia.node);
  Ends& nb = r.ends(ib.node);
  auto put = [](Ends& n, int base, EdgeLabel x, EdgeLabel y, EdgeLabel z) {
    n[mod4(base + 1)] = x;
    n[mod4(base + 2)] = y;
    n[mod4(base + 3)] = z;
  };
  if (s.dir == Direction::fwd) {
    put(na, ia.slot, a[3], b[1], b[2]);
    put(nb, ib.slot, b[3], a[1], a[2]);
  } else {
    put(na, ia.slot, b[2], b[3], a[1]);
    put(nb, ib.slot, a[2], a[3], b[1]);
  }
  Direction back = s.dir == Direction::fwd ? Direction::rev : Direction::fwd;
  return {std::move(r), make_site(MoveId::O7, back, {{"edge", m}})};
}

// Two marked vertices and four crossings; names starting with "Tp"/"Bp" are boundary
// points, every other name joins two slots inside the tableau.
struct TableauNode {
  bool vertex;
  std::array<const char*, 4> e;
};
using Tableau = std::array<TableauNode, 6>;

inline const Tableau& o8_side(bool rhs) {
  static const Tableau lhs{{{true, {"Tp1", "AX3", "AX1", "Tp2"}},
                            {true, {"Tp4", "Tp3", "X1B", "BX2"}},
                            {false, {"X1B", "AX1", "X3X1", "X1X2"}},
                            {false, {"BX2", "X1X2", "X2X4", "Bp4"}},
                            {false, {"X3X1", "AX3", "Bp1", "X3X4"}},
                            {false, {"X2X4", "X3X4", "Bp2", "Bp3"}}}};
  static const Tableau rhs_{{{true, {"Tp4", "Tp3", "AX1", "AX3"}},
                             {true, {"Tp1", "BX2", "BX1", "Tp2"}},
                             {false, {"BX1", "X1X2", "X3X1", "AX1"}},
                             {false, {"BX2", "Bp1", "X2X4", "X1X2"}},
                             {false, {"X3X1", "X3X4", "Bp4", "AX3"}},
                             {false, {"X2X4", "Bp2", "Bp3", "X3X4"}}}};
  return rhs ? rhs_ : lhs;
}

inline std::array<std::string, 4> tableau_ends(const TableauNode& n, bool mirror) {
  std::array<std::string, 4> e;
  int shift = mirror && !n.vertex ? 1 : 0;
  for (int i = 0; i < 4; ++i) e[i] = n.e[mod4(i + shift)];
  return e;
}

inline bool boundary_name(const std::string& s) { return s.rfind("Tp", 0) == 0 || s.rfind("Bp", 0) == 0; }

struct TableauMatch {
  std::array<int, 6> node{};
  std::map<std::string, EdgeLabel> boundary;
};

inline std::optional<TableauMatch> match_tableau(const MarkedGraphDiagram& d, const Tableau& t, bool mirror, int node,
                                                 int rot) {
  std::array<std::array<std::string, 4>, 6> te;
  for (int i = 0; i < 6; ++i) te[i] = tableau_ends(t[i], mirror);
  auto partner = [&](int tn, int ts) -> std::pair<int, int> {
    for (int i = 0; i < 6; ++i)
      for (int k = 0; k < 4; ++k)
        if ((i != tn || k != ts) && te[i][k] == te[tn][ts]) return {i, k};
    return {-1, -1};
  };
  if (rot % 2 != 0 || node < 0 || node >= d.node_count()) return std::nullopt;
  EdgeIndex idx(d);
  std::array<int, 6> rotation{};
  TableauMatch m;
  m.node.fill(-1);
  m.node[0] = node;
  rotation[0] = mod4(rot);
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int tn = queue[qi];
    int dn = m.node[tn];
    if (d.is_vertex(dn) != t[tn].vertex) return std::nullopt;
    for (int k = 0; k < 4; ++k) {
      Incidence here{dn, mod4(k + rotation[tn])};
      EdgeLabel lab = d.ends(dn)[here.slot];
      const std::string& name = te[tn][k];
      if (boundary_name(name)) {
        m.boundary[name] = lab;
        continue;
      }
      auto [t2, k2] = partner(tn, k);
      Incidence there = idx.other_end(d, here);
      int r2 = mod4(there.slot - k2);
      if (r2 % 2 != 0) return std::nullopt;
      if (m.node[t2] >= 0) {
        if (m.node[t2] != there.node || rotation[t2] != r2) return std::nullopt;
        continue;
      }
      if (std::find(m.node.begin(), m.node.end(), there.node) != m.node.end()) return std::nullopt;
      m.node[t2] = there.node;
      rotation[t2] = r2;
      queue.push_back(t2);
    }
  }
  if (queue.size() != 6) return std::nullopt;
  return m;
}

inline MoveResult tableau_swap(const MarkedGraphDiagram& d, const MoveSite& s) {
  int node = s.get("node"), rot = s.get("rot"), mirror = s.get("mirror");
  if (mirror != 0 && mirror != 1) throw PatternMismatch("mirror must be 0 or 1");
  bool fwd = s.dir == Direction::fwd;
  auto m = match_tableau(d, o8_side(!fwd), mirror == 1, node, rot);
  if (!m) throw PatternMismatch(s.str() + ": tableau does not match");
  std::set<int> matched(m->node.begin(), m->node.end());
  std::set<EdgeLabel> used;
  for (int n = 0; n < d.node_count(); ++n)
    if (!matched.count(n))
      for (EdgeLabel e : d.ends(n)) used.insert(e);
  for (const auto& [name, e] : m->boundary) used.insert(e);
  FreshLabels fresh(used);
  std::map<std::string, EdgeLabel> inner;
  const Tableau& out = o8_side(fwd);
  MarkedGraphDiagram r = d;
  for (int i = 0; i < 6; ++i) {
    auto names = tableau_ends(out[i], mirror == 1);
    Ends& e = r.ends(m->node[i]);
    for (int k = 0; k < 4; ++k) {
      if (boundary_name(names[k])) {
        e[k] = m->boundary.at(names[k]);
      } else {
        auto it = inner.find(names[k]);
        if (it == inner.end()) it = inner.emplace(names[k], fresh.next()).first;
        e[k] = it->second;
      }
    }
  }
  Direction back = fwd ? Direction::rev : Direction::fwd;
  return {std::move(r), make_site(MoveId::O8, back, {{"node", node}, {"rot", 0}, {"mirror", mirror}})};
}

}  // namespace detail

namespace detail {

inline MoveResult rewrite(const MarkedGraphDiagram& d, const MoveSite& s) {
  bool fwd = s.dir == Direction::fwd;
  switch (s.id) {
    case MoveId::O1:
    case MoveId::O6:
    case MoveId::O6p:
      return fwd ? curl_insert(d, s) : curl_remove(d, s);
    case MoveId::O2:
      return fwd ? finger_insert(d, s) : finger_remove(d, s);
    case MoveId::O3:
    case MoveId::O4:
    case MoveId::O4p:
      return triangle_flip(d, s);
    case MoveId::O5:
      return vertex_pass(d, s);
    case MoveId::O7:
      return vertex_slide(d, s);
    case MoveId::O8:
      return tableau_swap(d, s);
  }
  throw PatternMismatch("unknown move");
}

// Crossings and vertices added by a site (negative for removals).
inline std::pair<int, int> growth(const MoveSite& s) {
  int sign = s.dir == Direction::fwd ? 1 : -1;
  switch (s.id) {
    case MoveId::O1:
      return {sign, 0};
    case MoveId::O2:
      return {2 * sign, 0};
    case MoveId::O6:
    case MoveId::O6p:
      return {0, sign};
    default:
      return {0, 0};
  }
}

}  // namespace detail

// Every site of `id` in D, both directions where they differ. Triangle moves (O3, O4,
// O4p) and O5 are their own inverses and are listed forward only.
inline std::vector<MoveSite> enumerate_sites(const MarkedGraphDiagram& d, MoveId id) {
  using detail::make_site;
  std::vector<MoveSite> out;
  EdgeIndex idx(d);
  switch (id) {
    case MoveId::O1:
    case MoveId::O6:
    case MoveId::O6p: {
      std::vector<int> chirs = id == MoveId::O1 ? std::vector<int>{1, -1} : std::vector<int>{0};
      for (const auto& [e, inc] : idx.all())
        for (int side = 0; side < 2; ++side)
          for (int c : chirs) {
            std::vector<std::pair<std::string, int>> a{{"edge", e}, {"side", side}};
            if (id == MoveId::O1) a.emplace_back("chir", c);
            out.push_back(make_site(id, Direction::fwd, a));
          }
      if (d.free_loops > 0)
        for (int c : chirs) {
          std::vector<std::pair<std::string, int>> a{{"loop", 1}};
          if (id == MoveId::O1) a.emplace_back("chir", c);
          out.push_back(make_site(id, Direction::fwd, a));
        }
      for (int n = 0; n < d.node_count(); ++n)
        if (detail::curl_slot(d, id, n)) out.push_back(make_site(id, Direction::rev, {{"node", n}}));
      break;
    }
    case MoveId::O2: {
      auto comp = node_components(d);
      std::vector<Incidence> darts;
      for (int n = 0; n < d.node_count(); ++n)
        for (int sl = 0; sl < 4; ++sl) darts.push_back({n, sl});
      auto add = [&](std::vector<std::pair<std::string, int>> a) {
        for (int over = 0; over < 2; ++over) {
          auto b = a;
          b.emplace_back("over", over);
          out.push_back(make_site(id, Direction::fwd, std::move(b)));
        }
      };
      for (const Face& f : faces(d))
        for (std::size_t i = 0; i < f.darts.size(); ++i)
          for (std::size_t j = i + 1; j < f.darts.size(); ++j) {
            Incidence x = f.darts[i], y = f.darts[j];
            if (d.ends(x.node)[x.slot] == d.ends(y.node)[y.slot]) continue;
            add({{"n1", x.node}, {"s1", x.slot}, {"n2", y.node}, {"s2", y.slot}});
          }
      for (Incidence x : darts) add({{"n1", x.node}, {"s1", x.slot}, {"n2", x.node}, {"s2", x.slot}});
      for (Incidence x : darts)
        for (Incidence y : darts)
          if (x < y && comp[x.node] != comp[y.node])
            add({{"n1", x.node}, {"s1", x.slot}, {"n2", y.node}, {"s2", y.slot}});
      if (d.free_loops >= 1)
        for (Incidence x : darts) add({{"n1", x.node}, {"s1", x.slot}, {"loop2", 1}});
      if (d.free_loops >= 1)
        add({{"loop", 1}});
      if (d.free_loops >= 2) add({{"loop1", 1}, {"loop2", 1}});
      int c = static_cast<int>(d.crossings.size());
      for (int p = 0; p < c; ++p)
        for (int q = p + 1; q < c; ++q)
          if (detail::clasp_bigon(d, p, q)) out.push_back(make_site(id, Direction::rev, {{"n1", p}, {"n2", q}}));
      break;
    }
    case MoveId::O3:
    case MoveId::O4:
    case MoveId::O4p:
      for (const Face& f : faces(d)) {
        if (f.darts.size() != 3) continue;
        auto t = detail::triangle_at(d, idx, f.darts[0]);
        if (t && detail::triangle_kind(d, *t) == id)
          out.push_back(make_site(id, Direction::fwd, {{"n", f.darts[0].node}, {"s", f.darts[0].slot}}));
      }
      break;
    case MoveId::O5:
      for (int v = static_cast<int>(d.crossings.size()); v < d.node_count(); ++v)
        for (int j : {1, 3})
          if (detail::vertex_bigon(d, v, j)) out.push_back(make_site(id, Direction::fwd, {{"v", v}, {"j", j}}));
      break;
    case MoveId::O7:
      for (const auto& [e, inc] : idx.all())
        if (detail::vertex_pair(d, e))
          for (Direction dir : {Direction::fwd, Direction::rev}) out.push_back(make_site(id, dir, {{"edge", e}}));
      break;
    case MoveId::O8:
      for (Direction dir : {Direction::fwd, Direction::rev})
        for (int v = static_cast<int>(d.crossings.size()); v < d.node_count(); ++v)
          for (int rot : {0, 2})
            for (int mirror : {0, 1})
              if (detail::match_tableau(d, detail::o8_side(dir == Direction::rev), mirror == 1, v, rot))
                out.push_back(make_site(id, dir, {{"node", v}, {"rot", rot}, {"mirror", mirror}}));
      break;
  }
  return out;
}

// Applies `site` and returns the result with a site that undoes it.
inline MoveResult apply(const MarkedGraphDiagram& d, const MoveSite& site) {
  MoveResult r = detail::rewrite(d, site);
  detail::assert_valid(r.diagram, site);
  if (site.id == MoveId::O2 && site.dir == Direction::rev) {
    // The finger that recreates the bigon is found among the forward sites of the result,
    // trying first those whose darts lie on the strands that ran through the bigon.
    std::set<EdgeLabel> merged;
    for (int n : {site.get("n1"), site.get("n2")})
      for (EdgeLabel e : d.ends(n)) merged.insert(e);
    const bool new_loops = r.diagram.free_loops > d.free_loops;
    auto on_merged = [&](const MoveSite& s) {
      if (s.dir != Direction::fwd) return false;
      for (const char* k : {"n1", "n2"}) {
        std::string slot = std::string("s") + k[1];
        if (s.has(k) && !merged.count(r.diagram.ends(s.get(k))[s.get(slot)])) return false;
      }
      return new_loops || !(s.has("loop") || s.has("loop1") || s.has("loop2"));
    };
    const auto target = canonical_signature(d);
    auto sites = enumerate_sites(r.diagram, MoveId::O2);
    std::stable_partition(sites.begin(), sites.end(), on_merged);
    bool found = false;
    for (const MoveSite& s : sites) {
      if (s.dir != Direction::fwd) continue;
      if (canonical_signature(detail::rewrite(r.diagram, s).diagram) == target) {
        r.inverse = s;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error(site.str() + ": no inverse finger move found");
  }
  return r;
}

struct WalkOptions {
  int max_crossings = 8;
  int max_vertices = 4;
};

struct WalkStep {
  MoveSite site;
  MarkedGraphDiagram diagram;
};

// n successive moves. Each step picks a move family uniformly among the allowed ones
// that have a site, then a site uniformly; sites that would exceed the size caps are
// skipped, and while the diagram has at most one node removals are skipped when
// anything else is available.
inline std::vector<WalkStep> random_walk_steps(const MarkedGraphDiagram& d, std::uint64_t seed, int n,
                                               const std::vector<MoveId>& allowed, WalkOptions opt = {}) {
  std::mt19937_64 rng(seed);
  std::set<MoveId> allow(allowed.begin(), allowed.end());
  std::vector<WalkStep> out;
  MarkedGraphDiagram cur = d;
  for (int step = 0; step < n; ++step) {
    int c = static_cast<int>(cur.crossings.size()), v = static_cast<int>(cur.vertices.size());
    bool small = c + v <= 1;
    std::vector<std::vector<MoveSite>> groups, shrinking;
    for (MoveId id : kAllMoves) {
      if (!allow.count(id)) continue;
      std::vector<MoveSite> keep, shrink;
      for (MoveSite& s : enumerate_sites(cur, id)) {
        auto [dc, dv] = detail::growth(s);
        if (c + dc > opt.max_crossings || v + dv > opt.max_vertices) continue;
        (small && (dc < 0 || dv < 0) ? shrink : keep).push_back(std::move(s));
      }
      if (!keep.empty()) groups.push_back(std::move(keep));
      if (!shrink.empty()) shrinking.push_back(std::move(shrink));
    }
    if (groups.empty()) groups = std::move(shrinking);
    if (groups.empty()) throw Stuck("no applicable move site at step " + std::to_string(step));
    const auto& g = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
    const MoveSite& s = g[std::uniform_int_distribution<std::size_t>(0, g.size() - 1)(rng)];
    MoveResult r = detail::rewrite(cur, s);
    detail::assert_valid(r.diagram, s);
    cur = std::move(r.diagram);
    out.push_back({s, cur});
  }
  return out;
}

// The diagrams of random_walk_steps.
inline std::vector<MarkedGraphDiagram> random_walk(const MarkedGraphDiagram& d, std::uint64_t seed, int n,
                                                   const std::vector<MoveId>& allowed, WalkOptions opt = {}) {
  std::vector<MarkedGraphDiagram> out;
  for (auto& st : random_walk_steps(d, seed, n, allowed, opt)) out.push_back(std::move(st.diagram));
  return out;
}

}  // namespace mgd
