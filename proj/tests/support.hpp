#pragma once

// Fixture access and brute-force oracles shared by the test binaries. The oracles
// deliberately avoid the library's component maps and propagation code.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mgd/invariants.hpp"
#include "mgd/io.hpp"
#include "mgd/moves.hpp"
#include "mgd/states.hpp"

namespace mgd::test {

inline std::string fixture_path(const std::string& name) { return std::string(MGD_FIXTURE_DIR) + "/" + name + ".mgd"; }

inline MgdDocument fixture_doc(const std::string& name) { return load_file(fixture_path(name)); }
inline MarkedGraphDiagram fixture(const std::string& name) { return fixture_doc(name).diagram; }

// Every fixture, by file stem, in sorted order.
inline std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(MGD_FIXTURE_DIR))
    if (e.path().extension() == ".mgd") out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

inline MarkedGraphDiagram parse_text(const std::string& body) { return parse(body).diagram; }

// Switch every crossing.
inline MarkedGraphDiagram mirror(MarkedGraphDiagram d) {
  for (auto& c : d.crossings) c.ends = detail::rotated(c.ends, 1);
  return d;
}

// Edge labels in first-occurrence order.
inline std::vector<EdgeLabel> edge_list(const MarkedGraphDiagram& d) {
  std::vector<EdgeLabel> out;
  for (int n = 0; n < d.node_count(); ++n)
    for (EdgeLabel e : d.ends(n))
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  return out;
}

// Components of the diagram viewed as strands: a crossing carries slot 0 to 2 and 1 to 3,
// a marked vertex joins all four slots. Flood fill over edges; free loops count one each.
inline int brute_graph_components(const MarkedGraphDiagram& d) {
  std::map<EdgeLabel, std::set<EdgeLabel>> adj;
  for (int n = 0; n < d.node_count(); ++n) {
    const Ends& e = d.ends(n);
    for (int s = 0; s < 4; ++s)
      for (int t = 0; t < 4; ++t)
        if (d.is_vertex(n) || (s - t) % 2 == 0) adj[e[s]].insert(e[t]);
  }
  std::set<EdgeLabel> seen;
  int count = 0;
  for (const auto& [start, nb] : adj) {
    if (seen.count(start)) continue;
    ++count;
    std::vector<EdgeLabel> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      EdgeLabel e = stack.back();
      stack.pop_back();
      for (EdgeLabel f : adj[e])
        if (seen.insert(f).second) stack.push_back(f);
    }
  }
  return count + d.free_loops;
}

// [D] by enumerating a label per edge. Edges meeting at a marked vertex must agree; a
// crossing needs an even count of each label. The crossing weight is read off the
// four labels in slot order: all equal x; constant along both strands y; pairs across
// slots (0,1),(2,3) w; pairs across (0,3),(1,2) z. Free loops contribute a factor 2.
inline Poly4 brute_state_sum(const MarkedGraphDiagram& d) {
  auto edges = edge_list(d);
  std::map<EdgeLabel, int> pos;
  for (std::size_t i = 0; i < edges.size(); ++i) pos[edges[i]] = static_cast<int>(i);
  const int E = static_cast<int>(edges.size());
  if (E > 26) throw std::runtime_error("brute_state_sum: too many edges");
  Poly4 sum;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << E); ++bits) {
    auto lab = [&](EdgeLabel e) { return static_cast<int>((bits >> pos[e]) & 1u); };
    bool ok = true;
    for (const auto& v : d.vertices) {
      int a = lab(v.ends[0]);
      for (EdgeLabel e : v.ends) ok = ok && lab(e) == a;
    }
    if (!ok) continue;
    Poly4::Exponent ex{0, 0, 0, 0};
    for (const auto& c : d.crossings) {
      int l0 = lab(c.ends[0]), l1 = lab(c.ends[1]), l2 = lab(c.ends[2]), l3 = lab(c.ends[3]);
      if ((l0 + l1 + l2 + l3) % 2) {
        ok = false;
        break;
      }
      if (l0 == l1 && l1 == l2 && l2 == l3)
        ++ex[0];
      else if (l0 == l2 && l1 == l3)
        ++ex[1];
      else if (l0 == l1 && l2 == l3)
        ++ex[3];
      else
        ++ex[2];
    }
    if (ok) sum = sum + Poly4::monomial(ex);
  }
  return sum * Poly4(std::int64_t{1} << d.free_loops);
}

// Orientability by trying every direction per edge: crossings carry each strand
// through, marked vertices alternate in/out around the four slots.
inline bool brute_orientable(const MarkedGraphDiagram& d) {
  auto edges = edge_list(d);
  std::map<EdgeLabel, int> pos;
  for (std::size_t i = 0; i < edges.size(); ++i) pos[edges[i]] = static_cast<int>(i);
  const int E = static_cast<int>(edges.size());
  if (E > 26) throw std::runtime_error("brute_orientable: too many edges");
  // Incidence i of edge e (first or second occurrence in node/slot order) is outward
  // when bit e is 0 for the first occurrence, 1 for the second.
  std::map<std::pair<int, int>, int> occurrence;
  std::map<EdgeLabel, int> seen;
  for (int n = 0; n < d.node_count(); ++n)
    for (int s = 0; s < 4; ++s) occurrence[{n, s}] = seen[d.ends(n)[s]]++;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << E); ++bits) {
    auto out = [&](int n, int s) {
      int b = static_cast<int>((bits >> pos[d.ends(n)[s]]) & 1u);
      return (b ^ occurrence[{n, s}]) == 0;
    };
    bool ok = true;
    for (int n = 0; n < d.node_count() && ok; ++n) {
      if (d.is_vertex(n))
        ok = out(n, 0) == out(n, 2) && out(n, 1) == out(n, 3) && out(n, 0) != out(n, 1);
      else
        ok = out(n, 0) != out(n, 2) && out(n, 1) != out(n, 3);
    }
    if (ok) return true;
  }
  return false;
}

// Breadth-first search over classical Reidemeister moves, preferring shrinking steps,
// until a crossing-free diagram appears. A true result certifies a trivial link.
inline bool reduces_to_unlink(const MarkedGraphDiagram& link, int budget = 5000) {
  std::deque<MarkedGraphDiagram> queue{link};
  std::set<std::vector<std::vector<int>>> seen{canonical_signature(link)};
  while (!queue.empty() && budget-- > 0) {
    MarkedGraphDiagram d = queue.front();
    queue.pop_front();
    if (d.crossings.empty()) return true;
    for (MoveId id : {MoveId::O1, MoveId::O2, MoveId::O3})
      for (const MoveSite& s : enumerate_sites(d, id)) {
        if (s.dir == Direction::fwd && id != MoveId::O3) continue;
        MarkedGraphDiagram r = detail::rewrite(d, s).diagram;
        if (!seen.insert(canonical_signature(r)).second) continue;
        if (r.crossings.size() < d.crossings.size())
          queue.push_front(std::move(r));
        else
          queue.push_back(std::move(r));
      }
  }
  return false;
}

inline bool admissible_by_search(const MarkedGraphDiagram& d) {
  return reduces_to_unlink(resolve(d, Smoothing::positive)) && reduces_to_unlink(resolve(d, Smoothing::negative));
}

// Crossing sign from strand directions: slot s sits at angle 90*s degrees, a strand
// runs from its incoming slot to its outgoing one. Calibrated so that the kink whose
// curl multiplies [D] by (x+w) is positive, which makes the positive crossing the one
// where the under strand runs a clockwise quarter turn from the over strand.
inline int sign_from_orientation(const MarkedGraphDiagram& d, int node, const Orientation& o) {
  static constexpr int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
  auto dir = [&](int a, int b) {
    int out = o.flow[node][a] == Flow::out ? a : b, in = out == a ? b : a;
    return std::pair{dx[out] - dx[in], dy[out] - dy[in]};
  };
  auto [ox, oy] = dir(0, 2);
  auto [ux, uy] = dir(1, 3);
  return ox * uy - oy * ux < 0 ? +1 : -1;
}

// Linking total from scratch: half the signed count of crossings between different
// strand components.
inline int brute_total_linking(const MarkedGraphDiagram& d, const Orientation& o) {
  std::map<EdgeLabel, EdgeLabel> rep;
  std::function<EdgeLabel(EdgeLabel)> find = [&](EdgeLabel e) {
    if (!rep.count(e)) rep[e] = e;
    return rep[e] == e ? e : rep[e] = find(rep[e]);
  };
  for (const auto& c : d.crossings) {
    rep[find(c.ends[0])] = find(c.ends[2]);
    rep[find(c.ends[1])] = find(c.ends[3]);
  }
  int mixed = 0;
  for (int n = 0; n < static_cast<int>(d.crossings.size()); ++n)
    if (find(d.crossings[n].ends[0]) != find(d.crossings[n].ends[1])) mixed += sign_from_orientation(d, n, o);
  return mixed / 2;
}

// Diagrams reached by random walks from every fixture.
inline std::vector<MarkedGraphDiagram> walk_corpus(int count, int steps, std::uint64_t seed0, WalkOptions opt = {}) {
  std::vector<MarkedGraphDiagram> out;
  auto names = fixture_names();
  std::vector<MoveId> all(kAllMoves.begin(), kAllMoves.end());
  for (int i = 0; out.size() < static_cast<std::size_t>(count); ++i) {
    MarkedGraphDiagram start = fixture(names[i % names.size()]);
    if (start.crossings.size() > static_cast<std::size_t>(opt.max_crossings) ||
        start.vertices.size() > static_cast<std::size_t>(opt.max_vertices))
      continue;
    auto w = random_walk(start, seed0 + i, steps, all, opt);
    out.push_back(w.back());
  }
  return out;
}

struct MovePair {
  MarkedGraphDiagram before, after;
  MoveSite site;
};

// Up to `want` single-move pairs for one move family, at most three (evenly spaced)
// sites per diagram: the fixtures first, then diagrams reached by short walks.
inline std::vector<MovePair> move_pairs(MoveId id, std::size_t want, int max_crossings = 7) {
  std::vector<MovePair> out;
  auto take = [&](const MarkedGraphDiagram& d) {
    if (d.crossings.size() > static_cast<std::size_t>(max_crossings)) return;
    auto sites = enumerate_sites(d, id);
    std::size_t stride = std::max<std::size_t>(1, sites.size() / 3);
    for (std::size_t i = 0; i < sites.size() && out.size() < want; i += stride)
      out.push_back({d, apply(d, sites[i]).diagram, sites[i]});
  };
  for (const auto& n : fixture_names()) take(fixture(n));
  std::vector<MoveId> all(kAllMoves.begin(), kAllMoves.end());
  auto names = fixture_names();
  for (std::uint64_t seed = 1; out.size() < want && seed < 400; ++seed) {
    MarkedGraphDiagram start = fixture(names[seed % names.size()]);
    WalkOptions opt{max_crossings, 4};
    if (start.crossings.size() > static_cast<std::size_t>(max_crossings)) continue;
    for (const auto& d : random_walk(start, seed, 4, all, opt)) take(d);
  }
  return out;
}

// p restricted to x = y = 0, as a polynomial in z, w.
inline Poly4 at_xy_zero(const Poly4& p) {
  Poly4 r;
  for (const auto& [e, c] : p.terms())
    if (e[0] == 0 && e[1] == 0) r.add_term(e, c);
  return r;
}

// p restricted to z = w = 0, as a polynomial in x, y.
inline Poly4 at_zw_zero(const Poly4& p) {
  Poly4 r;
  for (const auto& [e, c] : p.terms())
    if (e[2] == 0 && e[3] == 0) r.add_term(e, c);
  return r;
}

}  // namespace mgd::test
