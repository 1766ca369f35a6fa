#pragma once

// Writhe family and the state-sum invariants R', S', Q, plus the classical R and S.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "mgd/algebra.hpp"
#include "mgd/diagram.hpp"
#include "mgd/states.hpp"

namespace mgd {

// Sign of crossing `node` under `o`. With the over strand leaving through slot s,
// the crossing is positive when the under strand leaves through slot s-1.
inline int crossing_sign(const MarkedGraphDiagram& d, int node, const Orientation& o) {
  if (d.is_vertex(node)) throw std::invalid_argument("crossing_sign on a marked vertex");
  int over_out = o.flow[node][0] == Flow::out ? 0 : 2;
  int under_out = o.flow[node][1] == Flow::out ? 1 : 3;
  return under_out == mod4(over_out - 1) ? +1 : -1;
}

struct WritheReport {
  std::optional<int> writhe;
  int self_writhe = 0;
  std::optional<int> total_linking;
};

namespace detail {

inline void require_classical(const MarkedGraphDiagram& d) {
  if (!d.classical()) throw std::invalid_argument("expected a diagram without marked vertices");
}

inline bool self_crossing(const Crossing& c, const ComponentMap& gc) { return gc.of(c.ends[0]) == gc.of(c.ends[1]); }

}  // namespace detail

// Sum of signs of crossings whose strands lie in the same component. Independent of
// the orientation chosen per component.
inline int self_writhe(const MarkedGraphDiagram& d) {
  detail::require_classical(d);
  auto o = orient(d);
  if (!o) throw std::logic_error("classical diagram failed to orient");
  ComponentMap gc = graph_component_map(d);
  int sw = 0;
  for (int n = 0; n < static_cast<int>(d.crossings.size()); ++n)
    if (detail::self_crossing(d.crossings[n], gc)) sw += crossing_sign(d, n, *o);
  return sw;
}

inline WritheReport writhe_report(const MarkedGraphDiagram& d, const Orientation& o) {
  detail::require_classical(d);
  ComponentMap gc = graph_component_map(d);
  WritheReport r;
  int w = 0, mixed = 0;
  for (int n = 0; n < static_cast<int>(d.crossings.size()); ++n) {
    int s = crossing_sign(d, n, o);
    w += s;
    if (detail::self_crossing(d.crossings[n], gc))
      r.self_writhe += s;
    else
      mixed += s;
  }
  r.writhe = w;
  r.total_linking = mixed / 2;
  return r;
}

inline WritheReport writhe_report(const MarkedGraphDiagram& d) {
  detail::require_classical(d);
  return writhe_report(d, *orient(d));
}

// Self-writhe of the positive resolution.
inline int t_plus(const MarkedGraphDiagram& d) { return self_writhe(resolve(d, Smoothing::positive)); }

inline LaurentInt R_prime(const MarkedGraphDiagram& d, StateSumOptions opt = {}) {
  return poly4_eval_laurent(state_sum(d, opt)).shifted(t_plus(d));
}

inline std::int64_t S_prime(const MarkedGraphDiagram& d, StateSumOptions opt = {}) {
  return poly4_eval_int(state_sum(d, opt));
}

inline SqrtGauss Q(const MarkedGraphDiagram& d, StateSumOptions opt = {}) {
  return sqrtgauss_scale(poly4_eval_sqrtgauss(state_sum(d, opt)), t_plus(d));
}

// ---------------------------------------------------------------------------
// Classical link invariants

enum class Mode { ori, unori };

class ModeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline int normalization_exponent(const MarkedGraphDiagram& d, Mode mode, const std::optional<Orientation>& o) {
  require_classical(d);
  if (mode == Mode::unori) return self_writhe(d);
  if (!o) throw ModeMismatch("oriented invariant requested without an orientation");
  return *writhe_report(d, *o).writhe;
}

// x = y = (z + z^-1)/2, z -> (z - z^-1)/2, w -> -(z - z^-1)/2
inline std::array<LaurentRat, 4> s_point() {
  LaurentRat half_plus = LaurentRat::monomial(1, Dyadic(1, 1)) + LaurentRat::monomial(-1, Dyadic(1, 1));
  LaurentRat half_minus = LaurentRat::monomial(1, Dyadic(1, 1)) - LaurentRat::monomial(-1, Dyadic(1, 1));
  return {half_plus, half_plus, half_minus, -half_minus};
}

}  // namespace detail

inline LaurentInt classical_R(const MarkedGraphDiagram& d, Mode mode, const std::optional<Orientation>& o = {},
                              StateSumOptions opt = {}) {
  int k = detail::normalization_exponent(d, mode, o);
  return poly4_eval_laurent(state_sum(d, opt)).shifted(k);
}

inline LaurentRat classical_S(const MarkedGraphDiagram& d, Mode mode, const std::optional<Orientation>& o = {},
                              StateSumOptions opt = {}) {
  int k = detail::normalization_exponent(d, mode, o);
  return poly4_eval(state_sum(d, opt), detail::s_point()).shifted(k);
}

}  // namespace mgd
