#pragma once

// Marked graph diagrams as combinatorial maps.
//
// A diagram is a list of classical crossings and marked vertices, each with four
// edge labels listed counterclockwise, plus a count of crossing-free circles.
// Crossings carry the over strand at slots 0 and 2. A marked vertex's positive
// smoothing joins slots (0,1) and (2,3); the negative one joins (1,2) and (3,0).
//
// Nodes are addressed by a single index: crossings first, then vertices.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace mgd {

using EdgeLabel = int;
using Ends = std::array<EdgeLabel, 4>;

struct Crossing {
  Ends ends{};
  friend bool operator==(const Crossing&, const Crossing&) = default;
};

struct MarkedVertex {
  Ends ends{};
  friend bool operator==(const MarkedVertex&, const MarkedVertex&) = default;
};

struct MarkedGraphDiagram {
  std::vector<Crossing> crossings;
  std::vector<MarkedVertex> vertices;
  int free_loops = 0;

  int node_count() const { return static_cast<int>(crossings.size() + vertices.size()); }
  bool is_vertex(int node) const { return node >= static_cast<int>(crossings.size()); }
  const Ends& ends(int node) const {
    return is_vertex(node) ? vertices[node - crossings.size()].ends : crossings[node].ends;
  }
  Ends& ends(int node) {
    return is_vertex(node) ? vertices[node - crossings.size()].ends : crossings[node].ends;
  }
  bool classical() const { return vertices.empty(); }

  friend bool operator==(const MarkedGraphDiagram&, const MarkedGraphDiagram&) = default;
};

// An attachment point: slot `slot` of node `node`. As a dart it means
// "leave `node` through `slot`".
struct Incidence {
  int node = 0;
  int slot = 0;
  friend auto operator<=>(const Incidence&, const Incidence&) = default;
};

inline int mod4(int s) { return ((s % 4) + 4) % 4; }

// ---------------------------------------------------------------------------
// Edge lookup

class EdgeIndex {
 public:
  explicit EdgeIndex(const MarkedGraphDiagram& d) {
    for (int n = 0; n < d.node_count(); ++n)
      for (int s = 0; s < 4; ++s) slots_[d.ends(n)[s]].push_back({n, s});
  }

  const std::map<EdgeLabel, std::vector<Incidence>>& all() const { return slots_; }

  // The other attachment of the edge at `at`. Requires a valid diagram.
  Incidence other_end(const MarkedGraphDiagram& d, Incidence at) const {
    const auto& v = slots_.at(d.ends(at.node)[at.slot]);
    return v[0] == at ? v[1] : v[0];
  }

  const std::vector<Incidence>& incidences(EdgeLabel e) const { return slots_.at(e); }

 private:
  std::map<EdgeLabel, std::vector<Incidence>> slots_;
};

inline EdgeLabel max_label(const MarkedGraphDiagram& d) {
  EdgeLabel m = 0;
  for (int n = 0; n < d.node_count(); ++n)
    for (EdgeLabel e : d.ends(n)) m = std::max(m, e);
  return m;
}

// Hands out the smallest labels not used by the diagram.
class LabelPool {
 public:
  explicit LabelPool(const MarkedGraphDiagram& d) {
    for (int n = 0; n < d.node_count(); ++n)
      for (EdgeLabel e : d.ends(n)) used_.insert(e);
  }
  EdgeLabel fresh() {
    while (used_.count(next_)) ++next_;
    used_.insert(next_);
    return next_;
  }

 private:
  std::set<EdgeLabel> used_;
  EdgeLabel next_ = 1;
};

// ---------------------------------------------------------------------------
// Union-find, optionally tracking parity relative to the root

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), parity_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t a) {
    if (parent_[a] == a) return a;
    std::size_t root = find(parent_[a]);
    parity_[a] ^= parity_[parent_[a]];
    parent_[a] = root;
    return root;
  }
  int parity(std::size_t a) {
    find(a);
    return parity_[a];
  }
  // Requires value(a) xor value(b) == rel. Returns false on contradiction.
  bool unite(std::size_t a, std::size_t b, int rel = 0) {
    std::size_t ra = find(a), rb = find(b);
    int pa = parity_[a], pb = parity_[b];
    if (ra == rb) return (pa ^ pb) == rel;
    parent_[rb] = ra;
    parity_[rb] = pa ^ pb ^ rel;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> parity_;
};

// ---------------------------------------------------------------------------
// Faces

struct Face {
  std::vector<Incidence> darts;  // empty for a side of a free loop
  int free_loop = -1;
};

// Next dart along a face: cross the edge, then take the counterclockwise-next slot.
// The face lies to the right of each dart.
inline Incidence face_next(const MarkedGraphDiagram& d, const EdgeIndex& idx, Incidence dart) {
  Incidence arrive = idx.other_end(d, dart);
  return {arrive.node, mod4(arrive.slot + 1)};
}

// Faces of the map, one list per connected component; each free loop has two faces.
inline std::vector<Face> faces(const MarkedGraphDiagram& d) {
  EdgeIndex idx(d);
  std::vector<Face> out;
  std::set<Incidence> seen;
  for (int n = 0; n < d.node_count(); ++n) {
    for (int s = 0; s < 4; ++s) {
      Incidence start{n, s};
      if (seen.count(start)) continue;
      Face f;
      Incidence cur = start;
      do {
        seen.insert(cur);
        f.darts.push_back(cur);
        cur = face_next(d, idx, cur);
      } while (!(cur == start) && f.darts.size() <= 4u * d.node_count());
      out.push_back(std::move(f));
    }
  }
  for (int i = 0; i < d.free_loops; ++i) {
    out.push_back(Face{{}, i});
    out.push_back(Face{{}, i});
  }
  return out;
}

// Connected components of the underlying 4-valent graph, indexed per node.
inline std::vector<int> node_components(const MarkedGraphDiagram& d, int* count = nullptr) {
  UnionFind uf(d.node_count());
  EdgeIndex idx(d);
  for (const auto& [e, inc] : idx.all())
    if (inc.size() == 2) uf.unite(inc[0].node, inc[1].node);
  std::vector<int> comp(d.node_count(), -1);
  std::map<std::size_t, int> id;
  for (int n = 0; n < d.node_count(); ++n) {
    auto [it, ins] = id.try_emplace(uf.find(n), static_cast<int>(id.size()));
    comp[n] = it->second;
  }
  if (count) *count = static_cast<int>(id.size());
  return comp;
}

// V - E + F for each connected component of the node graph (free loops excluded).
inline std::vector<int> euler_characteristics(const MarkedGraphDiagram& d) {
  int count = 0;
  auto comp = node_components(d, &count);
  std::vector<int> chi(count, 0);
  for (int n = 0; n < d.node_count(); ++n) chi[comp[n]] += 1 - 2;  // each node contributes 4 half-edges = 2 edges
  for (const Face& f : faces(d))
    if (!f.darts.empty()) chi[comp[f.darts.front().node]] += 1;
  return chi;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string kind;  // "edge-arity", "bad-label", "free-loops", "non-planar"
  std::string detail;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidateOptions {
  bool allow_nonplanar = false;
};

inline std::vector<Violation> validate(const MarkedGraphDiagram& d, ValidateOptions opt = {}) {
  std::vector<Violation> out;
  if (d.free_loops < 0) out.push_back({"free-loops", "negative free loop count"});
  std::map<EdgeLabel, int> count;
  for (int n = 0; n < d.node_count(); ++n)
    for (EdgeLabel e : d.ends(n)) {
      if (e <= 0) out.push_back({"bad-label", "edge label " + std::to_string(e) + " is not positive"});
      ++count[e];
    }
  bool arity_ok = true;
  for (const auto& [e, c] : count)
    if (c != 2) {
      arity_ok = false;
      out.push_back({"edge-arity", "edge " + std::to_string(e) + " occurs " + std::to_string(c) + " times"});
    }
  if (arity_ok && !opt.allow_nonplanar) {
    auto chi = euler_characteristics(d);
    for (std::size_t c = 0; c < chi.size(); ++c)
      if (chi[c] != 2)
        out.push_back({"non-planar", "component " + std::to_string(c) + " has V-E+F = " + std::to_string(chi[c])});
  }
  return out;
}

inline bool is_valid(const MarkedGraphDiagram& d, ValidateOptions opt = {}) { return validate(d, opt).empty(); }

// ---------------------------------------------------------------------------
// Components

// Component assignment for edges and free loops. Components are numbered by the
// smallest edge label they contain; free loops follow in declaration order.
struct ComponentMap {
  std::map<EdgeLabel, int> of_edge;
  int count = 0;
  int free_loop_base = 0;  // free loop i has component free_loop_base + i

  int of(EdgeLabel e) const { return of_edge.at(e); }
};

namespace detail {

template <class Merge>
ComponentMap label_components(const MarkedGraphDiagram& d, Merge merge_node) {
  std::vector<EdgeLabel> labels;
  for (int n = 0; n < d.node_count(); ++n)
    for (EdgeLabel e : d.ends(n)) labels.push_back(e);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto pos = [&](EdgeLabel e) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), e) - labels.begin());
  };
  UnionFind uf(labels.size());
  for (int n = 0; n < d.node_count(); ++n) {
    const Ends& en = d.ends(n);
    merge_node(d.is_vertex(n), [&](int s, int t) { uf.unite(pos(en[s]), pos(en[t])); });
  }
  ComponentMap cm;
  std::map<std::size_t, int> id;
  for (EdgeLabel e : labels) {  // ascending, so components are ordered by their smallest label
    auto [it, ins] = id.try_emplace(uf.find(pos(e)), static_cast<int>(id.size()));
    cm.of_edge[e] = it->second;
  }
  cm.free_loop_base = static_cast<int>(id.size());
  cm.count = cm.free_loop_base + d.free_loops;
  return cm;
}

}  // namespace detail

// Components of the diagram with crossings deleted; marked vertices are kept.
inline ComponentMap dhat_components(const MarkedGraphDiagram& d) {
  return detail::label_components(d, [](bool vertex, auto unite) {
    if (vertex) {
      unite(0, 1);
      unite(0, 2);
      unite(0, 3);
    }
  });
}

// Components of the marked graph: strands pass through crossings, vertices join all four ends.
inline ComponentMap graph_component_map(const MarkedGraphDiagram& d) {
  return detail::label_components(d, [](bool vertex, auto unite) {
    unite(0, 2);
    unite(1, 3);
    if (vertex) unite(0, 1);
  });
}

inline int graph_components(const MarkedGraphDiagram& d) { return graph_component_map(d).count; }

// ---------------------------------------------------------------------------
// Resolutions

enum class Smoothing { positive, negative };

// Smooths every marked vertex; the result is a classical diagram.
inline MarkedGraphDiagram resolve(const MarkedGraphDiagram& d, Smoothing sign) {
  std::vector<EdgeLabel> labels;
  for (int n = 0; n < d.node_count(); ++n)
    for (EdgeLabel e : d.ends(n)) labels.push_back(e);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto pos = [&](EdgeLabel e) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), e) - labels.begin());
  };
  UnionFind uf(labels.size());
  for (const auto& v : d.vertices) {
    const Ends& e = v.ends;
    if (sign == Smoothing::positive) {
      uf.unite(pos(e[0]), pos(e[1]));
      uf.unite(pos(e[2]), pos(e[3]));
    } else {
      uf.unite(pos(e[1]), pos(e[2]));
      uf.unite(pos(e[3]), pos(e[0]));
    }
  }
  // Each class becomes one edge, named by its smallest label.
  std::map<std::size_t, EdgeLabel> name;
  for (EdgeLabel e : labels) name.try_emplace(uf.find(pos(e)), e);
  std::set<std::size_t> on_crossing;
  MarkedGraphDiagram r;
  r.free_loops = d.free_loops;
  for (const auto& c : d.crossings) {
    Crossing nc;
    for (int s = 0; s < 4; ++s) {
      std::size_t root = uf.find(pos(c.ends[s]));
      on_crossing.insert(root);
      nc.ends[s] = name[root];
    }
    r.crossings.push_back(nc);
  }
  for (const auto& [root, label] : name)
    if (!on_crossing.count(root)) ++r.free_loops;
  return r;
}

// ---------------------------------------------------------------------------
// Orientation

enum class Flow : std::uint8_t { in, out };

struct Orientation {
  std::vector<std::array<Flow, 4>> flow;  // per node, per slot
  Flow at(Incidence i) const { return flow[i.node][i.slot]; }
};

// Finds an orientation if one exists. Each independent class is fixed by making
// its lowest-indexed incidence outward.
inline std::optional<Orientation> orient(const MarkedGraphDiagram& d) {
  const int nn = d.node_count();
  UnionFind uf(4 * static_cast<std::size_t>(nn));
  auto var = [](int n, int s) { return static_cast<std::size_t>(4 * n + s); };
  EdgeIndex idx(d);
  for (const auto& [e, inc] : idx.all())
    if (!uf.unite(var(inc[0].node, inc[0].slot), var(inc[1].node, inc[1].slot), 1)) return std::nullopt;
  for (int n = 0; n < nn; ++n) {
    bool ok = d.is_vertex(n)
                  ? uf.unite(var(n, 0), var(n, 2), 0) && uf.unite(var(n, 1), var(n, 3), 0) &&
                        uf.unite(var(n, 0), var(n, 1), 1)
                  : uf.unite(var(n, 0), var(n, 2), 1) && uf.unite(var(n, 1), var(n, 3), 1);
    if (!ok) return std::nullopt;
  }
  // The root's value is chosen so that the smallest member of its class is outward.
  std::map<std::size_t, int> root_value;
  for (std::size_t v = 0; v < 4u * nn; ++v) {
    std::size_t r = uf.find(v);
    if (!root_value.count(r)) root_value[r] = 1 ^ uf.parity(v);  // value(v) = root ^ parity == 1
  }
  Orientation o;
  o.flow.resize(nn);
  for (int n = 0; n < nn; ++n)
    for (int s = 0; s < 4; ++s) {
      std::size_t v = var(n, s);
      int val = root_value[uf.find(v)] ^ uf.parity(v);
      o.flow[n][s] = val ? Flow::out : Flow::in;
    }
  return o;
}

inline bool orientable(const MarkedGraphDiagram& d) { return orient(d).has_value(); }

// ---------------------------------------------------------------------------
// Companion loops

enum class Turn { left, right };

struct CompanionBase {
  enum class Kind { edge, vertex, free_loop };
  Kind kind = Kind::edge;
  // edge: the base point sits on the edge at `dart`; the loop heads away from dart.node.
  // vertex: the loop leaves marked vertex dart.node through dart.slot and closes on its
  //         first return to that vertex (no turning rule there).
  // free_loop: dart.node is the free loop index.
  Incidence dart;
};

struct LoopStep {
  EdgeLabel edge;
  Incidence from;  // the step leaves from.node through from.slot
};

struct CompanionLoop {
  std::vector<LoopStep> steps;
  std::vector<int> crossings_passed;  // node index per pass, repeated when passed twice
  std::vector<Turn> turns_used;
  int crossing_count() const { return static_cast<int>(crossings_passed.size()); }
};

struct LoopFailure {
  enum class Reason { edge_repeat, turns_exhausted, bad_base };
  Reason reason;
};

using LoopResult = std::variant<CompanionLoop, LoopFailure>;

namespace detail {

// Arriving through slot s, the ccw-next slot s+1 is on the traveller's right.
inline int turn_slot(int arrive_slot, Turn t) { return mod4(arrive_slot + (t == Turn::right ? 1 : -1)); }

// Shared tracer. `choose` is called at every interior marked vertex and returns the
// turn to take, or nullopt to abort with turns_exhausted.
template <class Choose>
LoopResult trace_loop(const MarkedGraphDiagram& d, const EdgeIndex& idx, const CompanionBase& base,
                      Choose&& choose) {
  CompanionLoop loop;
  if (base.kind == CompanionBase::Kind::free_loop) {
    if (base.dart.node < 0 || base.dart.node >= d.free_loops) return LoopFailure{LoopFailure::Reason::bad_base};
    loop.steps.push_back({0, base.dart});
    return loop;
  }
  if (base.dart.node < 0 || base.dart.node >= d.node_count() || base.dart.slot < 0 || base.dart.slot > 3)
    return LoopFailure{LoopFailure::Reason::bad_base};
  if (base.kind == CompanionBase::Kind::vertex && !d.is_vertex(base.dart.node))
    return LoopFailure{LoopFailure::Reason::bad_base};

  std::set<EdgeLabel> used;
  Incidence dart = base.dart;
  for (;;) {
    EdgeLabel e = d.ends(dart.node)[dart.slot];
    if (!used.insert(e).second) return LoopFailure{LoopFailure::Reason::edge_repeat};
    loop.steps.push_back({e, dart});
    Incidence arrive = idx.other_end(d, dart);
    if (base.kind == CompanionBase::Kind::vertex && arrive.node == base.dart.node) return loop;
    Incidence next{arrive.node, 0};
    if (d.is_vertex(arrive.node)) {
      std::optional<Turn> t = choose();
      if (!t) return LoopFailure{LoopFailure::Reason::turns_exhausted};
      loop.turns_used.push_back(*t);
      next.slot = turn_slot(arrive.slot, *t);
    } else {
      loop.crossings_passed.push_back(arrive.node);
      next.slot = mod4(arrive.slot + 2);
    }
    if (base.kind == CompanionBase::Kind::edge && next == base.dart) return loop;
    dart = next;
  }
}

}  // namespace detail

// Traces a companion loop following `turns`, one per interior marked vertex.
inline LoopResult companion_loop(const MarkedGraphDiagram& d, const CompanionBase& base,
                                 const std::vector<Turn>& turns) {
  EdgeIndex idx(d);
  std::size_t k = 0;
  return detail::trace_loop(d, idx, base, [&]() -> std::optional<Turn> {
    if (k >= turns.size()) return std::nullopt;
    return turns[k++];
  });
}

// Every companion loop from `base`, over all turn sequences.
inline std::vector<CompanionLoop> enumerate_companion_loops(const MarkedGraphDiagram& d, const CompanionBase& base) {
  EdgeIndex idx(d);
  std::vector<CompanionLoop> out;
  // Depth-first over turn prefixes: a prefix either closes, fails, or needs one more turn.
  std::vector<std::vector<Turn>> stack{{}};
  while (!stack.empty()) {
    std::vector<Turn> prefix = std::move(stack.back());
    stack.pop_back();
    std::size_t k = 0;
    LoopResult r = detail::trace_loop(d, idx, base, [&]() -> std::optional<Turn> {
      if (k >= prefix.size()) return std::nullopt;
      return prefix[k++];
    });
    if (auto* loop = std::get_if<CompanionLoop>(&r)) {
      out.push_back(std::move(*loop));
    } else if (std::get<LoopFailure>(r).reason == LoopFailure::Reason::turns_exhausted) {
      auto l = prefix, rt = prefix;
      l.push_back(Turn::left);
      rt.push_back(Turn::right);
      stack.push_back(std::move(rt));
      stack.push_back(std::move(l));
    }
  }
  return out;
}

// Loops from every edge dart, every vertex slot, and every free loop.
inline std::vector<CompanionLoop> enumerate_all_companion_loops(const MarkedGraphDiagram& d) {
  std::vector<CompanionLoop> out;
  auto append = [&](const CompanionBase& b) {
    auto v = enumerate_companion_loops(d, b);
    out.insert(out.end(), v.begin(), v.end());
  };
  for (int n = 0; n < d.node_count(); ++n)
    for (int s = 0; s < 4; ++s) {
      append({CompanionBase::Kind::edge, {n, s}});
      if (d.is_vertex(n)) append({CompanionBase::Kind::vertex, {n, s}});
    }
  for (int i = 0; i < d.free_loops; ++i) append({CompanionBase::Kind::free_loop, {i, 0}});
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism up to relabelling and rotation of each node by two slots

namespace detail {

// Breadth-first code of the component containing `start`, read with `start` rotated by `rot`.
inline std::vector<int> component_code(const MarkedGraphDiagram& d, const EdgeIndex& idx, int start, int rot) {
  std::map<int, std::pair<int, int>> seen;  // node -> (canonical index, rotation)
  std::vector<int> order{start};
  seen[start] = {0, rot};
  std::vector<int> code;
  for (std::size_t q = 0; q < order.size(); ++q) {
    int n = order[q];
    int r = seen[n].second;
    code.push_back(d.is_vertex(n) ? 1 : 0);
    for (int i = 0; i < 4; ++i) {
      Incidence other = idx.other_end(d, {n, mod4(r + i)});
      auto it = seen.find(other.node);
      if (it == seen.end()) {
        int orot = other.slot - other.slot % 2;  // arrival slot reads as 0 or 1
        it = seen.emplace(other.node, std::make_pair(static_cast<int>(order.size()), orot)).first;
        order.push_back(other.node);
      }
      code.push_back(it->second.first);
      code.push_back(mod4(other.slot - it->second.second));
    }
  }
  return code;
}

}  // namespace detail

// Canonical signature: sorted minimal codes of the components, then the free loop count.
inline std::vector<std::vector<int>> canonical_signature(const MarkedGraphDiagram& d) {
  EdgeIndex idx(d);
  int count = 0;
  auto comp = node_components(d, &count);
  std::vector<std::vector<int>> best(count);
  std::vector<bool> have(count, false);
  for (int n = 0; n < d.node_count(); ++n)
    for (int rot : {0, 2}) {
      auto code = detail::component_code(d, idx, n, rot);
      int c = comp[n];
      if (!have[c] || code < best[c]) {
        best[c] = std::move(code);
        have[c] = true;
      }
    }
  std::sort(best.begin(), best.end());
  best.push_back({d.free_loops});
  return best;
}

inline bool isomorphic(const MarkedGraphDiagram& a, const MarkedGraphDiagram& b) {
  return canonical_signature(a) == canonical_signature(b);
}

// Renames edge labels to 1..E in order of first appearance.
inline MarkedGraphDiagram compact_labels(const MarkedGraphDiagram& d) {
  std::map<EdgeLabel, EdgeLabel> rename;
  MarkedGraphDiagram r = d;
  for (int n = 0; n < r.node_count(); ++n)
    for (EdgeLabel& e : r.ends(n)) {
      auto [it, ins] = rename.try_emplace(e, static_cast<EdgeLabel>(rename.size() + 1));
      e = it->second;
    }
  return r;
}

}  // namespace mgd
