#pragma once

#include <string>

#include "tta/automaton.hpp"

namespace tta {

// Line-oriented automaton format:
//   clock <name>
//   param <name>
//   location <name> [initial] [accepting]
//   edge <src> <dst> guard "<expr>" resets {<c1>,<c2>} [label <letter>]
// Guard expressions are `true`, `false` or comparisons `<clock> <op> <value>` joined by `&&`,
// with op one of < <= == >= > != and value a natural, a fraction n/d or the parameter name.
TimedAutomaton parse_ta(const std::string& text);
TimedAutomaton load_ta(const std::string& path);
std::string write_ta(const TimedAutomaton& ta);

Guard parse_guard(const std::string& expr, const TimedAutomaton& context);
std::string write_guard_clause(const Clause& c, const TimedAutomaton& context);

}  // namespace tta
