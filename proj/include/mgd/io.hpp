#pragma once

// Line-oriented text format for marked graph diagrams.
//
//   mgd 1                  optional format version
//   name <text>            optional
//   flags <f> [<f> ...]    optional annotations, e.g. admissible, orientable
//   C a b c d              crossing, counterclockwise, over strand at a and c
//   V a b c d              marked vertex, positive smoothing joins (a,b) and (c,d)
//   O k                    k crossing-free circles
//   # ...                  comment

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgd/diagram.hpp"

namespace mgd {

inline constexpr int kFormatVersion = 1;

struct MgdDocument {
  std::string name;
  std::set<std::string> flags;
  MarkedGraphDiagram diagram;

  bool has_flag(const std::string& f) const { return flags.count(f) != 0; }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> v)
      : std::runtime_error(describe(v)), violations_(std::move(v)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string describe(const std::vector<Violation>& v) {
    std::string s = "invalid diagram:";
    for (const auto& x : v) s += " [" + x.kind + "] " + x.detail + ";";
    return s;
  }
  std::vector<Violation> violations_;
};

struct ParseOptions {
  ValidateOptions validate{};
};

inline MgdDocument parse(const std::string& text, ParseOptions opt = {}) {
  MgdDocument doc;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool seen_body = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "mgd") {
      int v = 0;
      if (!(ls >> v)) throw ParseError(lineno, "expected format version");
      if (v != kFormatVersion) throw ParseError(lineno, "unsupported format version " + std::to_string(v));
      if (seen_body) throw ParseError(lineno, "version line after diagram records");
    } else if (key == "name") {
      std::getline(ls, doc.name);
      auto b = doc.name.find_first_not_of(" \t");
      doc.name = b == std::string::npos ? "" : doc.name.substr(b);
      while (!doc.name.empty() && std::isspace(static_cast<unsigned char>(doc.name.back()))) doc.name.pop_back();
    } else if (key == "flags") {
      std::string f;
      while (ls >> f) doc.flags.insert(f);
    } else if (key == "C" || key == "V") {
      seen_body = true;
      Ends e{};
      for (int i = 0; i < 4; ++i)
        if (!(ls >> e[i])) throw ParseError(lineno, "expected four edge labels");
      if (key == "C")
        doc.diagram.crossings.push_back({e});
      else
        doc.diagram.vertices.push_back({e});
    } else if (key == "O") {
      seen_body = true;
      int k = 0;
      if (!(ls >> k) || k < 0) throw ParseError(lineno, "expected a non-negative free loop count");
      doc.diagram.free_loops += k;
    } else {
      throw ParseError(lineno, "unknown record '" + key + "'");
    }
    std::string extra;
    if (key != "name" && key != "flags" && (ls >> extra)) throw ParseError(lineno, "trailing input '" + extra + "'");
  }
  auto v = validate(doc.diagram, opt.validate);
  if (!v.empty()) throw ValidationError(std::move(v));
  return doc;
}

inline std::string serialize(const MgdDocument& doc) {
  std::ostringstream out;
  out << "mgd " << kFormatVersion << "\n";
  if (!doc.name.empty()) out << "name " << doc.name << "\n";
  if (!doc.flags.empty()) {
    out << "flags";
    for (const auto& f : doc.flags) out << ' ' << f;
    out << "\n";
  }
  auto row = [&](char tag, const Ends& e) { out << tag << ' ' << e[0] << ' ' << e[1] << ' ' << e[2] << ' ' << e[3] << "\n"; };
  for (const auto& c : doc.diagram.crossings) row('C', c.ends);
  for (const auto& v : doc.diagram.vertices) row('V', v.ends);
  if (doc.diagram.free_loops > 0) out << "O " << doc.diagram.free_loops << "\n";
  return out.str();
}

inline std::string serialize(const MarkedGraphDiagram& d) { return serialize(MgdDocument{{}, {}, d}); }

inline MgdDocument parse_diagram_text(const std::string& text) { return parse(text); }

inline MgdDocument load_file(const std::string& path, ParseOptions opt = {}) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), opt);
}

}  // namespace mgd
