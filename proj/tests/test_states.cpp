#include <gtest/gtest.h>

#include "support.hpp"

using namespace mgd;
using namespace mgd::test;

namespace {

const Poly4 x = Poly4::var(Var::x), y = Poly4::var(Var::y), z = Poly4::var(Var::z), w = Poly4::var(Var::w);

std::vector<MarkedGraphDiagram> corpus() {
  static const std::vector<MarkedGraphDiagram> c = [] {
    auto v = walk_corpus(150, 8, 11000);
    for (const auto& n : fixture_names()) v.push_back(fixture(n));
    return v;
  }();
  return c;
}

std::int64_t pow2(int n) { return std::int64_t{1} << n; }

std::vector<State> brute_filter(const MarkedGraphDiagram& d, bool want_bad) {
  std::vector<State> out;
  for (const State& s : legal_states(d)) {
    StateClass k = classify(d, s);
    if (want_bad ? k.bad : k.good) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(StateSum, Calibration) {
  EXPECT_EQ(state_sum(fixture("circle")), Poly4(2));
  EXPECT_EQ(state_sum(MarkedGraphDiagram{}), Poly4(1));
  EXPECT_EQ(state_sum(fixture("kink_pos")), Poly4(2) * (x + w));
  EXPECT_EQ(state_sum(fixture("kink_neg")), Poly4(2) * (x + z));
  EXPECT_EQ(state_sum(fixture("hopf")), Poly4(2) * (x * x + y * y + z * z + w * w));
}

TEST(StateSum, OmegaFourPair) {
  EXPECT_EQ(state_sum(fixture("omega4_D")), Poly4(2) * x * x);
  EXPECT_EQ(state_sum(fixture("omega4_D_prime")), Poly4(2) * x * x + Poly4(2) * x * z);
  EXPECT_EQ(state_sum(fixture("omega4_mirror_D")), Poly4(2) * x * x);
  EXPECT_EQ(state_sum(fixture("omega4_mirror_D_prime")), Poly4(2) * x * x + Poly4(2) * x * w);
}

TEST(StateSum, MatchesEdgeLabelEnumeration) {
  int checked = 0;
  for (const auto& d : corpus()) {
    if (edge_list(d).size() > 20) continue;
    ++checked;
    EXPECT_EQ(state_sum(d), brute_state_sum(d)) << serialize(d);
  }
  EXPECT_GT(checked, 100);
}

TEST(StateSum, EqualsSumOfLegalStateWeights) {
  for (const auto& d : corpus()) {
    Poly4 sum;
    for (const State& s : legal_states(d)) sum = sum + state_weight(d, s);
    EXPECT_EQ(sum, state_sum(d));
  }
}

TEST(StateSum, Homogeneous) {
  for (const auto& d : corpus()) {
    Poly4 sum = state_sum(d);
    for (const auto& [e, c] : sum.terms()) EXPECT_EQ(e[0] + e[1] + e[2] + e[3], d.crossings.size());
  }
}

TEST(StateSum, ResourceLimit) {
  StateSumOptions opt;
  opt.state_limit = 4;
  EXPECT_THROW(state_sum(fixture("spun_trefoil"), opt), ResourceLimit);
  EXPECT_THROW(legal_states(fixture("spun_trefoil"), opt), ResourceLimit);
  EXPECT_NO_THROW(state_sum(fixture("kink_pos"), opt));
}

TEST(Weights, KinkStates) {
  MarkedGraphDiagram k = fixture("kink_pos");
  State s00{{0, 0}}, s01{{0, 1}}, s11{{1, 1}};
  EXPECT_EQ(weight(k, 0, s00), WeightSymbol::x);
  EXPECT_EQ(weight(k, 0, s01), WeightSymbol::w);
  EXPECT_EQ(classify(k, s00), (StateClass{true, false}));
  EXPECT_EQ(classify(k, s01), (StateClass{false, true}));
  EXPECT_EQ(classify(k, s11), (StateClass{true, false}));
}

TEST(Weights, IllegalStateRejected) {
  MarkedGraphDiagram h = fixture("hopf");
  State s{{1, 0, 0, 0}};
  EXPECT_FALSE(is_legal(h, s));
  EXPECT_THROW(weight(h, 0, s), IllegalState);
}

TEST(Weights, CrossingFreeStatesAreGoodAndBad) {
  MarkedGraphDiagram d = fixture("two_spheres");
  for (const State& s : legal_states(d)) EXPECT_EQ(classify(d, s), (StateClass{true, true}));
}

TEST(GoodBad, OracleEquivalence) {
  for (const auto& d : corpus()) {
    if (dhat_components(d).count > 20) continue;
    EXPECT_EQ(good_states(d), brute_filter(d, false)) << serialize(d);
    EXPECT_EQ(bad_states(d), brute_filter(d, true)) << serialize(d);
  }
}

TEST(GoodBad, Counts) {
  for (const auto& d : corpus()) {
    const int n = graph_components(d);
    EXPECT_EQ(good_states(d).size(), static_cast<std::size_t>(pow2(n)));
    EXPECT_EQ(bad_states(d).size(), orientable(d) ? static_cast<std::size_t>(pow2(n)) : 0u) << serialize(d);
  }
}

TEST(GoodBad, Examples) {
  EXPECT_EQ(good_states(fixture("circle")).size(), 2u);
  EXPECT_EQ(good_states(fixture("hopf")).size(), 4u);
  EXPECT_EQ(good_states(fixture("spun_trefoil")).size(), 2u);
  EXPECT_TRUE(bad_states(fixture("omega4_D")).empty());
  auto s = construct_bad_state(fixture("kink_pos"), {0});
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->label, (std::vector<std::uint8_t>{0, 1}));
  EXPECT_FALSE(construct_bad_state(fixture("projective_plane"), {0}).has_value());
}

TEST(GoodBad, SeedLabelsRespected) {
  for (const auto& d : corpus()) {
    const int n = graph_components(d);
    auto seeds = seed_components(d);
    for (std::int64_t b = 0; b < pow2(n); ++b) {
      std::vector<std::uint8_t> bits(n);
      for (int i = 0; i < n; ++i) bits[i] = (b >> i) & 1;
      auto g = construct_good_state(d, bits);
      ASSERT_TRUE(g.has_value());
      for (int i = 0; i < n; ++i) EXPECT_EQ(g->label[seeds[i]], bits[i]);
    }
  }
}

// Setting x = y = 0 keeps exactly the bad states' weights; z = w = 0 exactly the good ones.
TEST(GoodBad, SubstitutionsSelectClasses) {
  for (const auto& d : corpus()) {
    Poly4 bad, good;
    for (const State& s : bad_states(d)) bad = bad + state_weight(d, s);
    for (const State& s : good_states(d)) good = good + state_weight(d, s);
    Poly4 sum = state_sum(d);
    EXPECT_EQ(at_xy_zero(sum), d.crossings.empty() ? sum : bad);
    EXPECT_EQ(at_zw_zero(sum), good);
  }
}

TEST(SPoint, PowerOfTwo) {
  for (const auto& d : corpus()) EXPECT_EQ(poly4_eval_int(state_sum(d)), pow2(graph_components(d)));
}

// Single-move relations between [D] and [D'].
class MoveRelations : public ::testing::TestWithParam<MoveId> {};

TEST_P(MoveRelations, Hold) {
  const MoveId id = GetParam();
  auto pairs = move_pairs(id, 40);
  ASSERT_GE(pairs.size(), 20u);
  const LaurentRat zr = LaurentRat::z(), zi = LaurentRat::z_inv();
  for (const auto& p : pairs) {
    Poly4 a = state_sum(p.before), b = state_sum(p.after);
    Poly4 diff = a - b;
    std::string ctx = p.site.str() + "\n" + serialize(p.before);
    switch (id) {
      case MoveId::O5:
      case MoveId::O6:
      case MoveId::O6p:
      case MoveId::O7:
        EXPECT_EQ(a, b) << ctx;
        break;
      case MoveId::O4:
      case MoveId::O4p:
        EXPECT_TRUE(at_xy_zero(diff).is_zero()) << ctx;
        EXPECT_TRUE(at_zw_zero(diff).is_zero()) << ctx;
        break;
      case MoveId::O8:
        EXPECT_TRUE(poly4_eval_laurent(diff).is_zero()) << ctx;
        EXPECT_EQ(poly4_eval_int(diff), 0) << ctx;
        EXPECT_TRUE(poly4_eval_sqrtgauss(diff).is_zero()) << ctx;
        break;
      case MoveId::O2:
      case MoveId::O3:
        EXPECT_TRUE(poly4_eval(diff, {LaurentRat(), LaurentRat(), zr, zi}).is_zero()) << ctx;
        EXPECT_TRUE(poly4_eval_sqrtgauss(diff).is_zero()) << ctx;
        break;
      case MoveId::O1: {
        // a kink multiplies [D] by (x+w) or (x+z), matching the sign it adds to t+
        int dt = t_plus(p.after) - t_plus(p.before);
        bool grow = p.after.crossings.size() > p.before.crossings.size();
        const Poly4& small = grow ? a : b;
        const Poly4& big = grow ? b : a;
        int sign = grow ? dt : -dt;
        ASSERT_TRUE(sign == 1 || sign == -1) << ctx;
        EXPECT_EQ(big, small * (x + (sign == 1 ? w : z))) << ctx;
        break;
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllMoves, MoveRelations, ::testing::ValuesIn(kAllMoves),
                         [](const auto& info) { return to_string(info.param); });
