#include "tta/tchecker.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "tta/error.hpp"
#include "tta/text_format.hpp"

namespace tta {

namespace {

bool plain_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "_" + out;
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "name{k1: v1 : k2: v2}" -> name and attribute map.
std::pair<std::string, std::map<std::string, std::string>> split_attributes(const std::string& s, int line) {
  auto open = s.find('{');
  if (open == std::string::npos) return {trim(s), {}};
  if (s.back() != '}') fail(ErrorKind::Parse, "line " + std::to_string(line) + ": unterminated attribute list");
  std::map<std::string, std::string> attrs;
  auto parts = split(s.substr(open + 1, s.size() - open - 2), ':');
  if (parts.size() == 1 && trim(parts[0]).empty()) return {trim(s.substr(0, open)), attrs};
  if (parts.size() % 2 != 0) fail(ErrorKind::Parse, "line " + std::to_string(line) + ": attributes must be key:value pairs");
  for (std::size_t i = 0; i < parts.size(); i += 2) attrs[trim(parts[i])] = trim(parts[i + 1]);
  return {trim(s.substr(0, open)), attrs};
}

}  // namespace

std::string export_tchecker(const TimedAutomaton& ta, const std::string& system_name) {
  ta.check_well_formed();
  if (ta.is_parametric()) fail(ErrorKind::Invalid, "export needs a parameter-free automaton; substitute a value first");
  max_constant(ta);  // rejects rational constants
  for (const auto& c : ta.clocks)
    if (!plain_identifier(c)) fail(ErrorKind::Invalid, "clock name '" + c + "' is not a plain identifier");

  std::vector<std::string> names;
  std::set<std::string> used(ta.clocks.begin(), ta.clocks.end());
  for (const auto& l : ta.locations) {
    std::string n = plain_identifier(l.name) ? l.name : sanitize(l.name);
    std::string base = n;
    for (int k = 1; used.count(n); ++k) n = base + "_" + std::to_string(k);
    used.insert(n);
    names.push_back(n);
  }

  std::ostringstream out;
  out << "system:" << sanitize(system_name) << "\n\n";
  for (const auto& e : ta.alphabet()) out << "event:" << sanitize(e) << "\n";
  out << "\nprocess:P\n";
  for (const auto& c : ta.clocks) out << "clock:1:" << c << "\n";
  out << "\n";
  for (std::size_t i = 0; i < ta.locations.size(); ++i) {
    std::vector<std::string> attrs;
    if (i == ta.initial) attrs.push_back("initial:");
    if (ta.locations[i].accepting) attrs.push_back("labels: accepting");
    out << "location:P:" << names[i] << "{";
    for (std::size_t k = 0; k < attrs.size(); ++k) out << (k ? " : " : "") << attrs[k];
    out << "}\n";
  }
  out << "\n";
  for (const auto& t : ta.transitions) {
    std::string resets;
    for (std::size_t k = 0; k < t.resets.size(); ++k) resets += (k ? "; " : "") + ta.clocks[t.resets[k]] + "=0";
    for (const auto& clause : t.guard.clauses) {
      std::vector<std::string> attrs;
      if (!clause.empty()) attrs.push_back("provided: " + write_guard_clause(clause, ta));
      if (!resets.empty()) attrs.push_back("do: " + resets);
      out << "edge:P:" << names[t.src] << ":" << names[t.dst] << ":" << sanitize(t.letter) << "{";
      for (std::size_t k = 0; k < attrs.size(); ++k) out << (k ? " : " : "") << attrs[k];
      out << "}\n";
    }
  }
  return out.str();
}

TimedAutomaton import_tchecker(const std::string& text, const std::string& label_name) {
  TimedAutomaton ta;
  std::optional<std::string> process;
  bool saw_initial = false;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  auto err = [&](const std::string& what) { fail(ErrorKind::Parse, "line " + std::to_string(number) + ": " + what); };
  while (std::getline(in, raw)) {
    ++number;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) err("expected <kind>:...");
    const std::string kind = line.substr(0, colon);
    const std::string rest = line.substr(colon + 1);
    if (kind == "system" || kind == "event") continue;
    if (kind == "process") {
      if (process) fail(ErrorKind::Unsupported, "only single-process systems are supported");
      process = split_attributes(rest, number).first;
    } else if (kind == "clock") {
      auto parts = split(split_attributes(rest, number).first, ':');
      if (parts.size() != 2 || trim(parts[0]) != "1") err("only scalar clocks (clock:1:<name>) are supported");
      ta.add_clock(trim(parts[1]));
    } else if (kind == "location") {
      auto [head, attrs] = split_attributes(rest, number);
      auto parts = split(head, ':');
      if (parts.size() != 2 || !process || trim(parts[0]) != *process) err("bad location declaration");
      bool accepting = false;
      if (auto it = attrs.find("labels"); it != attrs.end())
        for (const auto& l : split(it->second, ','))
          if (trim(l) == label_name) accepting = true;
      std::size_t id = ta.add_location(trim(parts[1]), accepting);
      if (attrs.count("initial")) {
        if (saw_initial) err("second initial location");
        saw_initial = true;
        ta.initial = id;
      }
      for (const auto& [k, v] : attrs)
        if (k != "initial" && k != "labels") fail(ErrorKind::Unsupported, "line " + std::to_string(number) + ": attribute '" + k + "'");
    } else if (kind == "edge") {
      auto [head, attrs] = split_attributes(rest, number);
      auto parts = split(head, ':');
      if (parts.size() != 4 || !process || trim(parts[0]) != *process) err("bad edge declaration");
      auto src = ta.find_location(trim(parts[1]));
      auto dst = ta.find_location(trim(parts[2]));
      if (!src || !dst) err("edge references an undeclared location");
      Transition t;
      t.src = *src;
      t.dst = *dst;
      t.letter = trim(parts[3]);
      if (auto it = attrs.find("provided"); it != attrs.end()) t.guard = parse_guard(it->second, ta);
      if (auto it = attrs.find("do"); it != attrs.end()) {
        std::set<std::size_t> resets;
        for (const auto& stmt : split(it->second, ';')) {
          if (trim(stmt).empty()) continue;
          auto eq = stmt.find('=');
          if (eq == std::string::npos || trim(stmt.substr(eq + 1)) != "0") err("only clock resets to 0 are supported");
          auto c = ta.find_clock(trim(stmt.substr(0, eq)));
          if (!c) err("unknown clock in reset");
          resets.insert(*c);
        }
        t.resets.assign(resets.begin(), resets.end());
      }
      for (const auto& [k, v] : attrs)
        if (k != "provided" && k != "do") fail(ErrorKind::Unsupported, "line " + std::to_string(number) + ": attribute '" + k + "'");
      ta.transitions.push_back(std::move(t));
    } else {
      fail(ErrorKind::Unsupported, "line " + std::to_string(number) + ": declaration '" + kind + "'");
    }
  }
  if (!saw_initial) fail(ErrorKind::Parse, "no initial location");
  ta.check_well_formed();
  return ta;
}

}  // namespace tta
