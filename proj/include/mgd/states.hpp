#pragma once

// States of a diagram, crossing weights, and the state sum [D] in Z[x,y,z,w].

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgd/algebra.hpp"
#include "mgd/diagram.hpp"

namespace mgd {

// Labels (0 or 1) indexed by D-hat component, see dhat_components().
struct State {
  std::vector<std::uint8_t> label;
  friend auto operator<=>(const State&, const State&) = default;
};

enum class WeightSymbol { x, y, z, w };

class IllegalState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStateLimit = std::uint64_t{1} << 30;

namespace detail {

inline std::array<std::uint8_t, 4> crossing_labels(const Crossing& c, const ComponentMap& cm, const State& s) {
  std::array<std::uint8_t, 4> l{};
  for (int i = 0; i < 4; ++i) l[i] = s.label.at(cm.of(c.ends[i]));
  return l;
}

inline bool legal_at(const std::array<std::uint8_t, 4>& l) { return (l[0] ^ l[1] ^ l[2] ^ l[3]) == 0; }

// Four labels with an even count of each value: all equal, or two pairs.
inline WeightSymbol weight_of(const std::array<std::uint8_t, 4>& l) {
  if (l[0] == l[1] && l[1] == l[2]) return WeightSymbol::x;
  if (l[0] == l[2]) return WeightSymbol::y;  // constant along both strands
  if (l[0] == l[1]) return WeightSymbol::w;
  return WeightSymbol::z;  // l[0] == l[3]
}

}  // namespace detail

inline bool is_legal(const MarkedGraphDiagram& d, const ComponentMap& cm, const State& s) {
  for (const auto& c : d.crossings)
    if (!detail::legal_at(detail::crossing_labels(c, cm, s))) return false;
  return true;
}

inline bool is_legal(const MarkedGraphDiagram& d, const State& s) { return is_legal(d, dhat_components(d), s); }

inline WeightSymbol weight(const Crossing& c, const ComponentMap& cm, const State& s) {
  auto l = detail::crossing_labels(c, cm, s);
  if (!detail::legal_at(l)) throw IllegalState("state is not legal at crossing");
  return detail::weight_of(l);
}

inline WeightSymbol weight(const MarkedGraphDiagram& d, int crossing, const State& s) {
  return weight(d.crossings.at(crossing), dhat_components(d), s);
}

// W_sigma: the product of crossing weights.
inline Poly4 state_weight(const MarkedGraphDiagram& d, const State& s) {
  ComponentMap cm = dhat_components(d);
  Poly4::Exponent e{0, 0, 0, 0};
  for (const auto& c : d.crossings) ++e[static_cast<int>(weight(c, cm, s))];
  return Poly4::monomial(e);
}

struct StateSumOptions {
  std::uint64_t state_limit = kDefaultStateLimit;
};

// [D]: sum over legal states of the product of crossing weights. Labels are
// assigned component by component; a crossing is checked as soon as all four of
// its ends are labelled.
inline Poly4 state_sum(const MarkedGraphDiagram& d, StateSumOptions opt = {}) {
  ComponentMap cm = dhat_components(d);
  const int n = cm.count;
  if (n >= 64 || (std::uint64_t{1} << n) > opt.state_limit)
    throw ResourceLimit("state enumeration over " + std::to_string(n) + " components exceeds the state limit");

  struct Check {
    std::array<int, 4> comp;
  };
  std::vector<std::vector<Check>> ready(n);  // crossings whose highest component is i
  for (const auto& c : d.crossings) {
    Check ch;
    int hi = 0;
    for (int i = 0; i < 4; ++i) {
      ch.comp[i] = cm.of(c.ends[i]);
      hi = std::max(hi, ch.comp[i]);
    }
    ready[hi].push_back(ch);
  }

  std::map<Poly4::Exponent, std::int64_t> acc;
  std::vector<std::uint8_t> label(n, 0);
  Poly4::Exponent e{0, 0, 0, 0};
  // Explicit recursion over component index.
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      ++acc[e];
      return;
    }
    for (std::uint8_t v = 0; v < 2; ++v) {
      label[i] = v;
      bool ok = true;
      std::size_t applied = 0;
      for (const Check& ch : ready[i]) {
        std::array<std::uint8_t, 4> l{label[ch.comp[0]], label[ch.comp[1]], label[ch.comp[2]], label[ch.comp[3]]};
        if (!detail::legal_at(l)) {
          ok = false;
          break;
        }
        ++e[static_cast<int>(detail::weight_of(l))];
        ++applied;
      }
      if (ok) self(self, i + 1);
      for (std::size_t k = 0; k < applied; ++k) {
        const Check& ch = ready[i][k];
        std::array<std::uint8_t, 4> l{label[ch.comp[0]], label[ch.comp[1]], label[ch.comp[2]], label[ch.comp[3]]};
        --e[static_cast<int>(detail::weight_of(l))];
      }
    }
  };
  rec(rec, 0);

  Poly4 p;
  for (const auto& [ex, c] : acc) p.add_term(ex, c);
  return p;
}

// Every legal state, enumerated as binary numbers over component indices (component 0 is the low bit).
inline std::vector<State> legal_states(const MarkedGraphDiagram& d, StateSumOptions opt = {}) {
  ComponentMap cm = dhat_components(d);
  const int n = cm.count;
  if (n >= 64 || (std::uint64_t{1} << n) > opt.state_limit)
    throw ResourceLimit("state enumeration over " + std::to_string(n) + " components exceeds the state limit");
  std::vector<State> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    State s;
    s.label.resize(n);
    for (int i = 0; i < n; ++i) s.label[i] = (bits >> i) & 1u;
    if (is_legal(d, cm, s)) out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Good and bad states

// A crossing-free diagram makes every state both good and bad.
struct StateClass {
  bool good = false;
  bool bad = false;
  bool mixed() const { return !good && !bad; }
  friend bool operator==(const StateClass&, const StateClass&) = default;
};

inline StateClass classify(const MarkedGraphDiagram& d, const State& s) {
  ComponentMap cm = dhat_components(d);
  StateClass k{true, true};
  for (const auto& c : d.crossings) {
    WeightSymbol w = weight(c, cm, s);
    bool g = w == WeightSymbol::x || w == WeightSymbol::y;
    k.good = k.good && g;
    k.bad = k.bad && !g;
  }
  return k;
}

// Seed D-hat component per graph component: the lowest-indexed one it contains.
inline std::vector<int> seed_components(const MarkedGraphDiagram& d) {
  ComponentMap dh = dhat_components(d);
  ComponentMap gc = graph_component_map(d);
  std::vector<int> seed(gc.count, -1);
  for (const auto& [e, g] : gc.of_edge) {
    int h = dh.of(e);
    if (seed[g] < 0 || h < seed[g]) seed[g] = h;
  }
  for (int i = 0; i < d.free_loops; ++i) seed[gc.free_loop_base + i] = dh.free_loop_base + i;
  return seed;
}

namespace detail {

// Solves label constraints across crossings: `flip` selects bad (labels flip along
// each strand) or good (labels persist). Returns nullopt on a parity contradiction.
inline std::optional<State> propagate_state(const MarkedGraphDiagram& d, const std::vector<std::uint8_t>& bits,
                                            bool flip) {
  ComponentMap dh = dhat_components(d);
  ComponentMap gc = graph_component_map(d);
  if (bits.size() != static_cast<std::size_t>(gc.count)) throw std::invalid_argument("one bit per graph component");
  UnionFind uf(dh.count);
  int rel = flip ? 1 : 0;
  for (const auto& c : d.crossings) {
    if (!uf.unite(dh.of(c.ends[0]), dh.of(c.ends[2]), rel)) return std::nullopt;
    if (!uf.unite(dh.of(c.ends[1]), dh.of(c.ends[3]), rel)) return std::nullopt;
  }
  auto seeds = seed_components(d);
  // Each graph component is one union-find class; fix its root from the seed.
  std::map<std::size_t, int> root_val;
  for (std::size_t g = 0; g < seeds.size(); ++g) {
    std::size_t s = static_cast<std::size_t>(seeds[g]);
    root_val[uf.find(s)] = bits[g] ^ uf.parity(s);
  }
  State st;
  st.label.resize(dh.count);
  for (int h = 0; h < dh.count; ++h) st.label[h] = static_cast<std::uint8_t>(root_val.at(uf.find(h)) ^ uf.parity(h));
  return st;
}

inline std::vector<State> all_propagated(const MarkedGraphDiagram& d, bool flip) {
  int n = graph_components(d);
  if (n >= 63) throw ResourceLimit("too many graph components");
  std::vector<State> out;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (b >> i) & 1u;
    auto s = propagate_state(d, bits, flip);
    if (!s) return {};
    out.push_back(std::move(*s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// The unique bad state with the given seed labels, or nullopt when none exists.
inline std::optional<State> construct_bad_state(const MarkedGraphDiagram& d, const std::vector<std::uint8_t>& bits) {
  return detail::propagate_state(d, bits, true);
}

inline std::optional<State> construct_good_state(const MarkedGraphDiagram& d, const std::vector<std::uint8_t>& bits) {
  return detail::propagate_state(d, bits, false);
}

// Sorted by label vector.
inline std::vector<State> bad_states(const MarkedGraphDiagram& d) { return detail::all_propagated(d, true); }
inline std::vector<State> good_states(const MarkedGraphDiagram& d) { return detail::all_propagated(d, false); }

}  // namespace mgd
