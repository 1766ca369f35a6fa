#pragma once

// JSON summary of a diagram: components, orientability, [D], R', S', Q, resolutions.

#include <json.hpp>

#include "mgd/invariants.hpp"
#include "mgd/states.hpp"

namespace mgd {

struct ReportOptions {
  bool states = false;
  StateSumOptions sum{};
};

inline nlohmann::ordered_json report(const MarkedGraphDiagram& d, ReportOptions opt = {}) {
  using nlohmann::ordered_json;
  const Poly4 sum = state_sum(d, opt.sum);
  const int tp = t_plus(d);
  ordered_json j;
  j["dhat_components"] = dhat_components(d).count;
  j["graph_components"] = graph_components(d);
  j["orientable"] = orientable(d);
  j["t_plus"] = tp;
  j["state_sum"] = sum.str();
  j["R_prime"] = poly4_eval_laurent(sum).shifted(tp).str();
  j["S_prime"] = poly4_eval_int(sum);
  j["Q"] = sqrtgauss_scale(poly4_eval_sqrtgauss(sum), tp).str();
  ordered_json res;
  for (auto [key, s] : {std::pair{"positive", Smoothing::positive}, std::pair{"negative", Smoothing::negative}}) {
    MarkedGraphDiagram l = resolve(d, s);
    res[key] = {{"crossings", l.crossings.size()}, {"components", graph_components(l)}};
  }
  j["resolutions"] = res;
  if (opt.states) {
    ordered_json list = ordered_json::array();
    for (const State& s : legal_states(d, opt.sum)) {
      std::string bits;
      for (auto b : s.label) bits += char('0' + b);
      StateClass k = classify(d, s);
      std::string cls = k.good && k.bad ? "good,bad" : k.good ? "good" : k.bad ? "bad" : "mixed";
      list.push_back({{"labels", bits}, {"class", cls}, {"weight", state_weight(d, s).str()}});
    }
    j["states"] = list;
  }
  return j;
}

}  // namespace mgd
