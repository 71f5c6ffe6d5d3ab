#pragma once

// Line-oriented text formats: crossed modules (.xm), sliced diagrams
// (.dg) and movies (.mv).  '#' starts a comment; blank lines are
// ignored.  Printing emits the canonical form, and parse(print(x)) == x.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xmk/algebra.hpp"
#include "xmk/diagram.hpp"
#include "xmk/error.hpp"

namespace xmk {

namespace io_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream is(line);
  std::string t;
  while (is >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

struct Lines {
  std::vector<std::vector<std::string>> rows;  // tokenized, comment-free
  std::vector<int> lineno;

  static Lines read(const std::string& text) {
    Lines l;
    std::istringstream is(text);
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
      ++n;
      auto toks = tokenize(line);
      if (toks.empty()) continue;
      l.rows.push_back(std::move(toks));
      l.lineno.push_back(n);
    }
    return l;
  }
};

[[noreturn]] inline void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

inline int to_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) fail(line, "bad integer '" + s + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(line, "bad integer '" + s + "'");
  }
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// crossed module format

inline CrossedModule parse_xmod(const std::string& text) {
  using namespace io_detail;
  Lines l = Lines::read(text);
  std::size_t i = 0;
  auto expect_row = [&]() -> const std::vector<std::string>& {
    if (i >= l.rows.size()) fail(l.lineno.empty() ? 0 : l.lineno.back(), "unexpected end of file");
    return l.rows[i];
  };
  {
    const auto& r = expect_row();
    if (r.size() != 2 || r[0] != "xmod" || r[1] != "v1") fail(l.lineno[i], "expected 'xmod v1'");
    ++i;
  }
  auto parse_table_rows = [&](int order) {
    std::vector<Elem> table;
    for (int row = 0; row < order; ++row) {
      const auto& r = expect_row();
      if (static_cast<int>(r.size()) != order) fail(l.lineno[i], "expected " + std::to_string(order) + " entries");
      for (const auto& s : r) table.push_back(to_int(s, l.lineno[i]));
      ++i;
    }
    return table;
  };

  std::optional<FiniteGroup> base;
  {
    const auto& r = expect_row();
    if (r.size() == 3 && r[0] == "base" && r[1] == "cyclic") {
      base = cyclic_group(to_int(r[2], l.lineno[i]));
      ++i;
    } else if (r.size() == 3 && r[0] == "base" && r[1] == "order") {
      int n = to_int(r[2], l.lineno[i]);
      ++i;
      base = FiniteGroup::from_table(n, parse_table_rows(n));
    } else {
      fail(l.lineno[i], "expected 'base cyclic N' or 'base order N'");
    }
  }

  std::optional<FiniteGroup> fibre;
  std::optional<GroupAction> action;
  bool action_derived = false;
  {
    const auto& r = expect_row();
    if (r.size() == 3 && r[0] == "fibre" && r[1] == "group-algebra") {
      auto [e, act] = group_algebra_module(*base, to_int(r[2], l.lineno[i]));
      fibre = std::move(e);
      action = std::move(act);
      action_derived = true;
      ++i;
    } else if (r.size() == 3 && r[0] == "fibre" && r[1] == "cyclic") {
      fibre = cyclic_group(to_int(r[2], l.lineno[i]));
      ++i;
    } else if (r.size() == 3 && r[0] == "fibre" && r[1] == "order") {
      int n = to_int(r[2], l.lineno[i]);
      ++i;
      fibre = FiniteGroup::from_table(n, parse_table_rows(n));
    } else {
      fail(l.lineno[i], "expected fibre stanza");
    }
  }

  std::vector<Elem> boundary;
  {
    const auto& r = expect_row();
    if (r.empty() || r[0] != "boundary") fail(l.lineno[i], "expected boundary stanza");
    if (r.size() == 2 && r[1] == "trivial") {
      boundary.assign(fibre->order(), base->identity());
      ++i;
    } else if (r.size() == 1) {
      ++i;
      const auto& v = expect_row();
      if (static_cast<int>(v.size()) != fibre->order()) fail(l.lineno[i], "boundary needs one entry per fibre element");
      for (const auto& s : v) boundary.push_back(to_int(s, l.lineno[i]));
      ++i;
    } else {
      for (std::size_t k = 1; k < r.size(); ++k) boundary.push_back(to_int(r[k], l.lineno[i]));
      if (static_cast<int>(boundary.size()) != fibre->order())
        fail(l.lineno[i], "boundary needs one entry per fibre element");
      ++i;
    }
  }

  if (!action_derived) {
    if (i < l.rows.size() && l.rows[i][0] == "action") {
      const auto& r = l.rows[i];
      if (r.size() == 2 && r[1] == "trivial") {
        action = GroupAction::trivial(*base, *fibre);
        ++i;
      } else {
        ++i;
        std::vector<Elem> map;
        for (int row = 0; row < base->order(); ++row) {
          const auto& v = expect_row();
          if (static_cast<int>(v.size()) != fibre->order()) fail(l.lineno[i], "action row size mismatch");
          for (const auto& s : v) map.push_back(to_int(s, l.lineno[i]));
          ++i;
        }
        action = GroupAction(*base, *fibre, std::move(map));
      }
    } else {
      fail(i < l.rows.size() ? l.lineno[i] : 0, "expected action stanza");
    }
  }
  if (i != l.rows.size()) fail(l.lineno[i], "trailing content");

  CrossedModule cm(*base, *fibre, std::move(boundary), *action);
  VerifyReport rep = cm.verify();
  if (!rep.ok())
    throw Error(ErrorCode::ValidationError,
                "crossed module axioms fail: " + rep.violations.front().rule + " " +
                    rep.violations.front().detail);
  return cm;
}

inline std::string print_xmod(const CrossedModule& cm) {
  std::ostringstream os;
  os << "xmod v1\n";
  os << "base order " << cm.base().order() << "\n";
  for (int a = 0; a < cm.base().order(); ++a) {
    for (int b = 0; b < cm.base().order(); ++b) os << (b ? " " : "") << cm.base().mul(a, b);
    os << "\n";
  }
  os << "fibre order " << cm.fibre().order() << "\n";
  for (int a = 0; a < cm.fibre().order(); ++a) {
    for (int b = 0; b < cm.fibre().order(); ++b) os << (b ? " " : "") << cm.fibre().mul(a, b);
    os << "\n";
  }
  os << "boundary";
  for (int e = 0; e < cm.fibre().order(); ++e) os << " " << cm.bnd(e);
  os << "\n";
  os << "action\n";
  for (int g = 0; g < cm.base().order(); ++g) {
    for (int e = 0; e < cm.fibre().order(); ++e) os << (e ? " " : "") << cm.act(g, e);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// diagram format

inline std::string print_tile(const Tile& t) {
  switch (t.kind) {
    case TileKind::Id: return t.up_a ? "id^" : "idv";
    case TileKind::Cup: return t.up_a ? "cupl" : "cupr";
    case TileKind::Cap: return t.up_a ? "capr" : "capl";
    case TileKind::Dot: return "dot:" + t.dot + (t.up_a ? "" : ":v");
    case TileKind::CrossPos:
    case TileKind::CrossNeg: {
      std::string s = t.kind == TileKind::CrossPos ? "x+" : "x-";
      s += ":";
      s += t.up_a ? '^' : 'v';
      s += t.up_b ? '^' : 'v';
      return s;
    }
  }
  return "?";
}

inline Tile parse_tile(const std::string& tok, int line) {
  using io_detail::fail;
  if (tok == "id^") return id_tile(true);
  if (tok == "idv") return id_tile(false);
  if (tok == "cupl") return cup_tile(true);
  if (tok == "cupr") return cup_tile(false);
  if (tok == "capr") return cap_tile(true);
  if (tok == "capl") return cap_tile(false);
  if (tok.rfind("dot:", 0) == 0) {
    std::string rest = tok.substr(4);
    bool up = true;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      std::string dir = rest.substr(colon + 1);
      rest = rest.substr(0, colon);
      if (dir == "v") up = false;
      else if (dir == "^") up = true;
      else fail(line, "bad dot direction '" + dir + "'");
    }
    if (rest.empty()) fail(line, "dot without a name");
    return dot_tile(rest, up);
  }
  if (tok.rfind("x+", 0) == 0 || tok.rfind("x-", 0) == 0) {
    bool pos = tok[1] == '+';
    bool ua = true, ub = true;
    if (tok.size() > 2) {
      if (tok.size() != 5 || tok[2] != ':') fail(line, "bad crossing decoration '" + tok + "'");
      auto dir = [&](char c) -> bool {
        if (c == '^') return true;
        if (c == 'v') return false;
        fail(line, "bad direction char");
      };
      ua = dir(tok[3]);
      ub = dir(tok[4]);
    }
    return cross_tile(pos, ua, ub);
  }
  fail(line, "unknown tile '" + tok + "'");
}

inline SlicedDiagram parse_diagram(const std::string& text) {
  using namespace io_detail;
  Lines l = Lines::read(text);
  if (l.rows.empty() || l.rows[0].size() != 2 || l.rows[0][0] != "diagram" || l.rows[0][1] != "v1")
    fail(l.rows.empty() ? 0 : l.lineno[0], "expected 'diagram v1'");
  SlicedDiagram d;
  for (std::size_t i = 1; i < l.rows.size(); ++i) {
    const auto& r = l.rows[i];
    if (r[0] != "slice") fail(l.lineno[i], "expected 'slice'");
    Slice s;
    for (std::size_t k = 1; k < r.size(); ++k) s.push_back(parse_tile(r[k], l.lineno[i]));
    d.slices.push_back(std::move(s));
  }
  DiagramReport rep = validate(d);
  if (!rep.ok())
    throw Error(ErrorCode::ValidationError, "diagram invalid at slice " +
                                                std::to_string(rep.violations.front().slice) + ": " +
                                                rep.violations.front().message);
  return d;
}

inline std::string print_diagram(const SlicedDiagram& d) {
  std::ostringstream os;
  os << "diagram v1\n";
  for (const auto& s : d.slices) {
    os << "slice";
    for (const auto& t : s) os << " " << print_tile(t);
    os << "\n";
  }
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace xmk
