// mgd: command-line front end for marked graph diagrams.
//
// exit codes: 0 ok, 1 usage, 2 parse/validation, 3 resource bound exceeded

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "mgd/io.hpp"
#include "mgd/moves.hpp"
#include "mgd/report.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kResource = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

mgd::StateSumOptions sum_options() {
  mgd::StateSumOptions o;
  if (const char* env = std::getenv("MGD_STATE_LIMIT")) {
    try {
      std::size_t pos = 0;
      o.state_limit = std::stoull(env, &pos);
      if (env[pos] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("MGD_STATE_LIMIT is not a non-negative integer: ") + env);
    }
  }
  return o;
}

std::vector<mgd::MoveId> parse_moves(const std::string& list) {
  if (list.empty()) return {mgd::kAllMoves.begin(), mgd::kAllMoves.end()};
  std::vector<mgd::MoveId> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto m = mgd::move_from_string(tok);
    if (!m) throw UsageError("unknown move '" + tok + "'");
    out.push_back(*m);
  }
  return out;
}

mgd::MoveId parse_move(const std::string& s) {
  auto m = mgd::move_from_string(s);
  if (!m) throw UsageError("unknown move '" + s + "'");
  return *m;
}

void print_text(const nlohmann::ordered_json& j) {
  for (const auto& [k, v] : j.items()) {
    if (k == "resolutions") {
      for (const auto& [sign, r] : v.items())
        std::cout << "L" << (sign == "positive" ? '+' : '-') << ": " << r["crossings"] << " crossings, "
                  << r["components"] << " components\n";
    } else if (k == "states") {
      std::cout << "states:\n";
      for (const auto& s : v)
        std::cout << "  " << s["labels"].get<std::string>() << "  " << s["class"].get<std::string>() << "  "
                  << s["weight"].get<std::string>() << "\n";
    } else {
      std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"marked graph diagrams: state sums, surface-link invariants, Yoshikawa moves"};
  app.require_subcommand(1);

  std::string file;
  bool json = false, states = false, nonplanar = false;
  std::string site_text, move_name, allow, sign;
  std::uint64_t seed = 0;
  int steps = 10;
  mgd::WalkOptions walk;

  auto* compute = app.add_subcommand("compute", "state sum and invariants");
  compute->add_option("file", file, "diagram file")->required();
  compute->add_flag("--json", json, "JSON output");
  compute->add_flag("--states", states, "list legal states");
  compute->add_flag("--nonplanar", nonplanar, "accept non-planar diagrams");

  auto* move = app.add_subcommand("move", "apply one move");
  move->add_option("file", file, "diagram file")->required();
  move->add_option("--site", site_text, "move site, e.g. \"O2 fwd n1=0 s1=1 n2=1 s2=3 over=0\"")->required();

  auto* sites = app.add_subcommand("sites", "list the sites of one move");
  sites->add_option("file", file, "diagram file")->required();
  sites->add_option("--move", move_name, "move name, e.g. O4 or O4p")->required();

  auto* fuzz = app.add_subcommand("fuzz", "random move walk with invariant tracking");
  fuzz->add_option("file", file, "diagram file")->required();
  fuzz->add_option("--seed", seed, "random seed");
  fuzz->add_option("--steps", steps, "number of moves")->check(CLI::NonNegativeNumber);
  fuzz->add_option("--allow", allow, "comma separated moves (default: all)");
  fuzz->add_option("--max-crossings", walk.max_crossings, "crossing cap")->capture_default_str();
  fuzz->add_option("--max-vertices", walk.max_vertices, "marked vertex cap")->capture_default_str();

  auto* res = app.add_subcommand("resolve", "smooth every marked vertex");
  res->add_option("file", file, "diagram file")->required();
  res->add_option("--sign", sign, "+ or -")->required()->check(CLI::IsMember({"+", "-"}));
  res->add_flag("--nonplanar", nonplanar, "accept non-planar diagrams");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    mgd::ParseOptions popt;
    popt.validate.allow_nonplanar = nonplanar;
    const mgd::MgdDocument doc = mgd::load_file(file, popt);
    const mgd::MarkedGraphDiagram& d = doc.diagram;

    if (*compute) {
      mgd::ReportOptions ro;
      ro.states = states;
      ro.sum = sum_options();
      auto j = mgd::report(d, ro);
      if (json)
        std::cout << j.dump(2) << "\n";
      else
        print_text(j);
    } else if (*move) {
      mgd::MoveSite s;
      try {
        s = mgd::MoveSite::parse(site_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      mgd::MoveResult r = mgd::apply(d, s);
      std::cout << "# inverse: " << r.inverse.str() << "\n" << mgd::serialize(r.diagram);
    } else if (*sites) {
      for (const auto& s : mgd::enumerate_sites(d, parse_move(move_name))) std::cout << s.str() << "\n";
    } else if (*fuzz) {
      auto opt = sum_options();
      auto line = [&](const mgd::MarkedGraphDiagram& x) {
        return "R'=" + mgd::R_prime(x, opt).str() + "  S'=" + std::to_string(mgd::S_prime(x, opt)) +
               "  Q=" + mgd::Q(x, opt).str();
      };
      const auto r0 = mgd::R_prime(d, opt);
      const auto s0 = mgd::S_prime(d, opt);
      bool stable = true;
      std::cout << "start  " << line(d) << "\n";
      int i = 0;
      for (const auto& st : mgd::random_walk_steps(d, seed, steps, parse_moves(allow), walk)) {
        std::cout << ++i << "  " << st.site.str() << "  " << line(st.diagram) << "\n";
        stable = stable && mgd::R_prime(st.diagram, opt) == r0 && mgd::S_prime(st.diagram, opt) == s0;
      }
      std::cout << "R' and S' " << (stable ? "constant" : "CHANGED") << "\n";
      if (!stable) return kInvalid;
    } else if (*res) {
      mgd::MgdDocument out;
      out.name = doc.name.empty() ? "" : doc.name + (sign == "+" ? ", L+" : ", L-");
      out.diagram = mgd::resolve(d, sign == "+" ? mgd::Smoothing::positive : mgd::Smoothing::negative);
      std::cout << mgd::serialize(out);
    }
  } catch (const UsageError& e) {
    std::cerr << "mgd: " << e.what() << "\n";
    return kUsage;
  } catch (const mgd::ResourceLimit& e) {
    std::cerr << "mgd: " << e.what() << "\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "mgd: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
