#pragma once

#include <string>

#include "tta/automaton.hpp"

namespace tta {

// Declarative tChecker syntax: one process, one event per letter, accepting locations
// labelled `accepting`. Needs a parameter-free automaton with integer constants.
// Location names that are not plain identifiers are rewritten.
std::string export_tchecker(const TimedAutomaton& ta, const std::string& system_name = "flat");

// Reads a single-process file in the same syntax. Locations carrying `label_name` in their
// labels become accepting.
TimedAutomaton import_tchecker(const std::string& text, const std::string& label_name = "accepting");

}  // namespace tta
