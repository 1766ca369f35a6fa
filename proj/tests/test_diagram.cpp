#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "support.hpp"

using namespace mgd;
using namespace mgd::test;

namespace {

std::vector<MarkedGraphDiagram> corpus() {
  static const std::vector<MarkedGraphDiagram> c = [] {
    auto v = walk_corpus(120, 8, 7000);
    for (const auto& n : fixture_names()) v.push_back(fixture(n));
    return v;
  }();
  return c;
}

bool has_kind(const std::vector<Violation>& v, const std::string& kind) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == kind; });
}

// Random relabelling, node shuffle, and rotation of each node by 0 or 2 slots.
MarkedGraphDiagram scramble(const MarkedGraphDiagram& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto edges = edge_list(d);
  std::vector<EdgeLabel> fresh(edges.size());
  std::iota(fresh.begin(), fresh.end(), 100);
  std::shuffle(fresh.begin(), fresh.end(), rng);
  std::map<EdgeLabel, EdgeLabel> ren;
  for (std::size_t i = 0; i < edges.size(); ++i) ren[edges[i]] = fresh[i];
  MarkedGraphDiagram r = d;
  for (int n = 0; n < r.node_count(); ++n) {
    for (EdgeLabel& e : r.ends(n)) e = ren[e];
    if (rng() & 1) r.ends(n) = detail::rotated(r.ends(n), 2);
  }
  std::shuffle(r.crossings.begin(), r.crossings.end(), rng);
  std::shuffle(r.vertices.begin(), r.vertices.end(), rng);
  return r;
}

}  // namespace

TEST(Validate, EmptyDiagramIsValid) {
  MarkedGraphDiagram d;
  EXPECT_TRUE(is_valid(d));
  EXPECT_EQ(graph_components(d), 0);
  EXPECT_EQ(dhat_components(d).count, 0);
}

TEST(Validate, EdgeArity) {
  MarkedGraphDiagram d;
  d.crossings.push_back({{1, 1, 2, 3}});
  auto v = validate(d);
  EXPECT_TRUE(has_kind(v, "edge-arity"));
}

TEST(Validate, NonPositiveLabel) {
  MarkedGraphDiagram d;
  d.crossings.push_back({{0, 0, 2, 2}});
  EXPECT_TRUE(has_kind(validate(d), "bad-label"));
}

TEST(Validate, NegativeFreeLoops) {
  MarkedGraphDiagram d;
  d.free_loops = -1;
  EXPECT_TRUE(has_kind(validate(d), "free-loops"));
}

// V(1,2,1,2) pairs opposite slots: the single vertex has two loops that must cross,
// so the traced map is a torus.
TEST(Validate, NonPlanarRejectedUnlessAllowed) {
  MarkedGraphDiagram d;
  d.vertices.push_back({{1, 2, 1, 2}});
  EXPECT_TRUE(has_kind(validate(d), "non-planar"));
  EXPECT_EQ(euler_characteristics(d), std::vector<int>{0});
  EXPECT_TRUE(is_valid(d, {.allow_nonplanar = true}));
}

TEST(Validate, PlanarFigureEight) {
  MarkedGraphDiagram d;
  d.vertices.push_back({{1, 1, 2, 2}});
  EXPECT_TRUE(is_valid(d));
}

TEST(Faces, EulerCharacteristicTwoPerComponent) {
  for (const auto& d : corpus()) {
    int count = 0;
    node_components(d, &count);
    EXPECT_EQ(euler_characteristics(d), std::vector<int>(count, 2));
  }
}

TEST(Faces, EveryDartInExactlyOneFace) {
  for (const auto& d : corpus()) {
    std::map<Incidence, int> seen;
    int loop_sides = 0;
    for (const Face& f : faces(d)) {
      if (f.darts.empty()) ++loop_sides;
      for (Incidence i : f.darts) ++seen[i];
    }
    EXPECT_EQ(loop_sides, 2 * d.free_loops);
    EXPECT_EQ(seen.size(), static_cast<std::size_t>(4 * d.node_count()));
    for (auto& [i, c] : seen) EXPECT_EQ(c, 1);
  }
}

TEST(Components, GraphComponentsMatchFloodFill) {
  for (const auto& d : corpus()) EXPECT_EQ(graph_components(d), brute_graph_components(d)) << serialize(d);
}

TEST(Components, DhatExamples) {
  EXPECT_EQ(dhat_components(fixture("circle")).count, 1);
  EXPECT_EQ(dhat_components(fixture("kink_pos")).count, 2);
  EXPECT_EQ(dhat_components(fixture("hopf")).count, 4);
  EXPECT_EQ(dhat_components(fixture("figure_eight_sphere")).count, 1);
  EXPECT_EQ(dhat_components(fixture("two_circles")).count, 2);
}

TEST(Components, OrderedBySmallestLabel) {
  MarkedGraphDiagram d = fixture("omega4_D");
  d.free_loops = 1;
  ComponentMap cm = dhat_components(d);
  // D-hat: {1}, then {2..8} joined through both vertices, then the free loop
  EXPECT_EQ(cm.count, 3);
  EXPECT_EQ(cm.of(1), 0);
  for (EdgeLabel e = 2; e <= 8; ++e) EXPECT_EQ(cm.of(e), 1);
  EXPECT_EQ(cm.free_loop_base, 2);
}

TEST(Resolve, FigureEightSphere) {
  MarkedGraphDiagram d = fixture("figure_eight_sphere");
  EXPECT_EQ(graph_components(resolve(d, Smoothing::positive)), 2);
  EXPECT_EQ(graph_components(resolve(d, Smoothing::negative)), 1);
}

TEST(Resolve, ValidVertexFreeAndNeverMerges) {
  for (const auto& d : corpus())
    for (Smoothing s : {Smoothing::positive, Smoothing::negative}) {
      MarkedGraphDiagram r = resolve(d, s);
      EXPECT_TRUE(is_valid(r)) << serialize(d);
      EXPECT_TRUE(r.vertices.empty());
      EXPECT_EQ(r.crossings.size(), d.crossings.size());
      EXPECT_GE(graph_components(r), graph_components(d));
    }
}

TEST(Orient, MatchesBruteForce) {
  for (const auto& d : corpus())
    if (edge_list(d).size() <= 18) EXPECT_EQ(orientable(d), brute_orientable(d)) << serialize(d);
}

TEST(Orient, FixtureFlags) {
  for (const auto& n : fixture_names()) {
    auto doc = fixture_doc(n);
    EXPECT_EQ(orientable(doc.diagram), doc.has_flag("orientable")) << n;
  }
}

TEST(Orient, FlowIsConsistent) {
  for (const auto& d : corpus()) {
    auto o = orient(d);
    if (!o) continue;
    EdgeIndex idx(d);
    for (const auto& [e, inc] : idx.all()) EXPECT_NE(o->at(inc[0]), o->at(inc[1]));
    for (int n = 0; n < d.node_count(); ++n) {
      int outs = 0;
      for (int s = 0; s < 4; ++s) outs += o->flow[n][s] == Flow::out;
      EXPECT_EQ(outs, 2);
    }
  }
}

TEST(CompanionLoops, EvenOnOrientedDiagrams) {
  for (const auto& d : corpus()) {
    if (!orientable(d) || d.vertices.size() > 6) continue;
    for (const auto& loop : enumerate_all_companion_loops(d)) EXPECT_EQ(loop.crossing_count() % 2, 0) << serialize(d);
  }
}

TEST(CompanionLoops, OddLoopOnNonOrientableDiagrams) {
  int checked = 0;
  for (const auto& d : corpus()) {
    if (orientable(d) || d.vertices.size() > 6) continue;
    ++checked;
    auto loops = enumerate_all_companion_loops(d);
    EXPECT_TRUE(std::any_of(loops.begin(), loops.end(), [](const auto& l) { return l.crossing_count() % 2 == 1; }))
        << serialize(d);
  }
  EXPECT_GT(checked, 0);
}

TEST(CompanionLoops, NoRepeatedEdges) {
  for (const auto& n : fixture_names()) {
    MarkedGraphDiagram d = fixture(n);
    for (const auto& loop : enumerate_all_companion_loops(d)) {
      std::set<EdgeLabel> edges;
      for (const auto& s : loop.steps) EXPECT_TRUE(edges.insert(s.edge).second) << n;
    }
  }
}

TEST(Isomorphism, InvariantUnderScrambling) {
  int i = 0;
  for (const auto& d : corpus()) {
    MarkedGraphDiagram s = scramble(d, ++i);
    EXPECT_TRUE(isomorphic(d, s)) << serialize(d) << "\n" << serialize(s);
  }
}

TEST(Isomorphism, DistinguishesMirrorAndMarker) {
  MarkedGraphDiagram t = fixture("trefoil");
  EXPECT_FALSE(isomorphic(t, mirror(t)));
  EXPECT_FALSE(isomorphic(fixture("kink_pos"), fixture("kink_neg")));
  EXPECT_FALSE(isomorphic(fixture("projective_plane"), fixture("projective_plane_mirror")));
}

TEST(Isomorphism, CompactLabels) {
  for (const auto& d : corpus()) {
    MarkedGraphDiagram c = compact_labels(d);
    EXPECT_TRUE(isomorphic(c, d));
    auto e = edge_list(c);
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(e[i], static_cast<EdgeLabel>(i + 1));
  }
}
