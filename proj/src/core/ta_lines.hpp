#pragma once

#include "lexer.hpp"
#include "tta/automaton.hpp"

namespace tta::detail {

// Applies a clock/param/location/edge line to `ta`. Returns false for other keywords.
bool apply_ta_line(TimedAutomaton& ta, const Line& line, bool& saw_initial);

std::vector<std::size_t> resolve_resets(const TimedAutomaton& ta, const std::vector<std::string>& names, int line);

// The body of write_ta without trailing checks; `prefix` is prepended to each line.
void write_ta_lines(const TimedAutomaton& ta, std::string& out, bool mark_initial, const std::string& prefix);

std::string write_resets(const TimedAutomaton& ta, const std::vector<std::size_t>& resets);

}  // namespace tta::detail
