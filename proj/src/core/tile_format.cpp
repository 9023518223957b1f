#include "tta/tile_format.hpp"

#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "ta_lines.hpp"
#include "tta/text_format.hpp"

namespace tta {

namespace {

using detail::Line;
using detail::parse_error;
using detail::word;

std::uint64_t natural(const Line& l, std::size_t i, const char* what) {
  const std::string& s = word(l, i, what);
  if (s.empty() || s.size() > 18 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    parse_error(l.number, std::string("expected a natural number for ") + what);
  return std::stoull(s);
}

TilePort parse_port(const Line& l, const TimedAutomaton& body) {
  TilePort p;
  p.location = word(l, 1, "port location");
  if (!body.find_location(p.location)) parse_error(l.number, "port '" + p.location + "' is not a declared location");
  if (word(l, 2, "'guard'") != "guard") parse_error(l.number, "expected 'guard'");
  try {
    p.guard = parse_guard(detail::quoted(l, 3, "guard"), body);
  } catch (const Error& e) {
    parse_error(l.number, e.what());
  }
  if (word(l, 4, "'resets'") != "resets") parse_error(l.number, "expected 'resets'");
  for (auto c : detail::resolve_resets(body, detail::set(l, 5, "resets"), l.number)) p.resets.push_back(body.clocks[c]);
  if (l.tokens.size() != 6) parse_error(l.number, "unexpected trailing token");
  return p;
}

void check_key(const Line& l, const TimedAutomaton& body, const std::string& key) {
  if (key != kSelf && !body.find_location(key)) parse_error(l.number, "unknown location '" + key + "'");
}

// Applies one line inside a tile block; returns false on `end`.
bool apply_tile_line(Tile& t, const Line& l) {
  const std::string& kw = l.tokens[0].text;
  bool saw_initial = false;
  if (kw == "end") {
    if (l.tokens.size() != 1) parse_error(l.number, "unexpected trailing token");
    return false;
  }
  if (kw == "input") {
    t.inputs.push_back(parse_port(l, t.body));
  } else if (kw == "output") {
    t.outputs.push_back(parse_port(l, t.body));
  } else if (kw == "declare") {
    const std::string& key = word(l, 1, "location or 'self'");
    check_key(l, t.body, key);
    if (word(l, 2, "'intervals'") != "intervals") parse_error(l.number, "expected 'intervals'");
    try {
      t.declared[key] = IntervalSet::parse(detail::quoted(l, 3, "interval set"));
    } catch (const Error& e) {
      parse_error(l.number, e.what());
    }
  } else if (kw == "cost") {
    const std::string& what = word(l, 1, "'location' or 'edge'");
    if (what == "location") {
      const std::string& loc = word(l, 2, "location");
      check_key(l, t.body, loc);
      t.location_cost[loc] = natural(l, 3, "cost");
      if (l.tokens.size() != 4) parse_error(l.number, "unexpected trailing token");
    } else if (what == "edge") {
      const std::string& src = word(l, 2, "source location");
      const std::string& dst = word(l, 3, "target location");
      check_key(l, t.body, src);
      check_key(l, t.body, dst);
      t.edge_cost[{src, dst}] = natural(l, 4, "cost");
      if (l.tokens.size() != 5) parse_error(l.number, "unexpected trailing token");
    } else {
      parse_error(l.number, "expected 'location' or 'edge' after 'cost'");
    }
  } else if (kw == "weight") {
    const std::string& key = word(l, 1, "location or 'self'");
    check_key(l, t.body, key);
    t.weight[key] = natural(l, 2, "weight");
  } else if (!detail::apply_ta_line(t.body, l, saw_initial)) {
    parse_error(l.number, "unknown keyword '" + kw + "' in tile block");
  }
  if (saw_initial) parse_error(l.number, "tiles have no initial location; use 'input'");
  return true;
}

std::string port_guard(const TilePort& p, const TimedAutomaton& body) {
  if (p.guard.is_false()) return "false";
  if (p.guard.clauses.size() != 1) fail(ErrorKind::Unsupported, "port guard of '" + p.location + "' is a disjunction");
  return write_guard_clause(p.guard.clauses[0], body);
}

std::string resets_text(const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

struct Parsed {
  std::vector<Tile> tiles;
  std::vector<Line> rest;  // lines outside tile blocks
};

Parsed parse_blocks(const std::string& text) {
  Parsed p;
  std::optional<Tile> cur;
  int start = 0;
  for (auto& l : detail::tokenize(text)) {
    if (cur) {
      if (!apply_tile_line(*cur, l)) {
        try {
          cur->check();
        } catch (const Error& e) {
          parse_error(start, e.what());
        }
        for (const auto& t : p.tiles)
          if (t.name == cur->name) parse_error(start, "duplicate tile '" + cur->name + "'");
        p.tiles.push_back(std::move(*cur));
        cur.reset();
      }
    } else if (l.tokens[0].text == "tile") {
      cur = Tile{};
      cur->name = word(l, 1, "tile name");
      if (!detail::is_identifier(cur->name)) parse_error(l.number, "bad tile name '" + cur->name + "'");
      start = l.number;
    } else {
      p.rest.push_back(std::move(l));
    }
  }
  if (cur) parse_error(start, "tile '" + cur->name + "' is missing 'end'");
  return p;
}

std::pair<std::string, std::string> split_port(const Line& l, const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == s.size()) parse_error(l.number, "expected <tile>.<location>, got '" + s + "'");
  return {s.substr(0, dot), s.substr(dot + 1)};
}

}  // namespace

std::vector<Tile> parse_tile_library(const std::string& text) {
  Parsed p = parse_blocks(text);
  if (!p.rest.empty()) parse_error(p.rest.front().number, "expected 'tile'");
  return p.tiles;
}

std::vector<Tile> load_tile_library(const std::string& path) { return parse_tile_library(detail::read_file(path)); }

std::string write_tile(const Tile& t) {
  std::string out = "tile " + t.name + "\n";
  TimedAutomaton body = t.body;
  body.initial = 0;
  detail::write_ta_lines(body, out, false, "  ");
  for (const auto& p : t.inputs)
    out += "  input " + p.location + " guard \"" + port_guard(p, t.body) + "\" resets " + resets_text(p.resets) + "\n";
  for (const auto& p : t.outputs)
    out += "  output " + p.location + " guard \"" + port_guard(p, t.body) + "\" resets " + resets_text(p.resets) + "\n";
  for (const auto& [k, v] : t.declared) out += "  declare " + k + " intervals \"" + v.str() + "\"\n";
  for (const auto& [k, v] : t.location_cost) out += "  cost location " + k + " " + std::to_string(v) + "\n";
  for (const auto& [k, v] : t.edge_cost) out += "  cost edge " + k.first + " " + k.second + " " + std::to_string(v) + "\n";
  for (const auto& [k, v] : t.weight) out += "  weight " + k + " " + std::to_string(v) + "\n";
  return out + "end\n";
}

TiledTA parse_tta(const std::string& text) {
  Parsed p = parse_blocks(text);
  TiledTA tta;
  std::optional<std::int64_t> ambient;
  std::optional<std::string> initial;
  auto lookup = [&](const Line& l, const std::string& name) -> const Tile& {
    for (const auto& t : p.tiles)
      if (t.name == name) return t;
    for (const auto& t : builtin_library())
      if (t.name == name) return t;
    parse_error(l.number, "unknown tile '" + name + "'");
  };
  for (const auto& l : p.rest) {
    const std::string& kw = l.tokens[0].text;
    if (kw == "ambient") {
      ambient = static_cast<std::int64_t>(natural(l, 1, "ambient constant"));
    } else if (kw == "instance") {
      const std::string& id = word(l, 1, "instance id");
      if (!detail::is_identifier(id) || id.find('.') != std::string::npos) parse_error(l.number, "bad instance id '" + id + "'");
      if (tta.find(id)) parse_error(l.number, "duplicate instance '" + id + "'");
      tta.tiles.push_back(TileInstance{id, lookup(l, word(l, 2, "tile name"))});
      if (l.tokens.size() != 3) parse_error(l.number, "unexpected trailing token");
    } else if (kw == "initial") {
      if (initial) parse_error(l.number, "second 'initial' line");
      initial = word(l, 1, "instance id");
    } else if (kw == "connect") {
      auto [sid, sloc] = split_port(l, word(l, 1, "source port"));
      auto [did, dloc] = split_port(l, word(l, 2, "target port"));
      auto s = tta.find(sid), d = tta.find(did);
      if (!s || !d) parse_error(l.number, "connection references an undeclared instance");
      TileTransition c{*s, sloc, *d, dloc};
      for (std::size_t i = 3; i < l.tokens.size(); i += 2) {
        const std::string& opt = word(l, i, "option");
        if (opt == "label") c.letter = word(l, i + 1, "label");
        else if (opt == "cost") c.cost = natural(l, i + 1, "cost");
        else parse_error(l.number, "unknown connection option '" + opt + "'");
      }
      tta.connections.push_back(std::move(c));
    } else {
      parse_error(l.number, "unknown keyword '" + kw + "'");
    }
  }
  if (tta.tiles.empty()) fail(ErrorKind::Parse, "no tile instances declared");
  if (initial) {
    auto i = tta.find(*initial);
    if (!i) fail(ErrorKind::Parse, "initial tile '" + *initial + "' is not an instance");
    tta.initial = *i;
  }
  if (ambient) {
    tta.ambient_c = *ambient;
  } else {
    std::vector<Tile> used;
    for (const auto& t : tta.tiles) used.push_back(t.tile);
    tta.ambient_c = library_max_constant(used);
  }
  tta.check();
  return tta;
}

TiledTA load_tta(const std::string& path) { return parse_tta(detail::read_file(path)); }

std::string write_tta(const TiledTA& tta) {
  std::string out;
  std::set<std::string> written;
  for (const auto& inst : tta.tiles)
    if (written.insert(inst.tile.name).second) out += write_tile(inst.tile) + "\n";
  out += "ambient " + std::to_string(tta.ambient_c) + "\n";
  for (const auto& inst : tta.tiles) out += "instance " + inst.id + " " + inst.tile.name + "\n";
  out += "initial " + tta.tiles.at(tta.initial).id + "\n";
  for (const auto& c : tta.connections) {
    out += "connect " + tta.tiles[c.src].id + "." + c.output + " " + tta.tiles[c.dst].id + "." + c.input;
    if (c.letter != "a") out += " label " + c.letter;
    if (c.cost != 0) out += " cost " + std::to_string(c.cost);
    out += "\n";
  }
  return out;
}

const std::vector<Tile>& builtin_library() {
  static const std::vector<Tile> lib = parse_tile_library(builtin_library_text());
  return lib;
}

std::int64_t library_max_constant(const std::vector<Tile>& library) {
  std::int64_t m = 0;
  for (const auto& t : library) {
    TimedAutomaton probe = t.body;
    probe.initial = 0;
    for (const auto* ports : {&t.inputs, &t.outputs})
      for (const auto& p : *ports) {
        Transition e;
        e.guard = p.guard;
        probe.transitions.push_back(e);
      }
    m = std::max(m, max_constant(probe));
  }
  return m;
}

const Tile& find_tile(const std::vector<Tile>& library, const std::string& name) {
  for (const auto& t : library)
    if (t.name == name) return t;
  fail(ErrorKind::Invalid, "no tile named '" + name + "'");
}

}  // namespace tta
