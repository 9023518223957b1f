#pragma once

#include <string>

#include "tta/automaton.hpp"

namespace tta::test {

std::string fixture_path(const std::string& name);
TimedAutomaton load_fixture_ta(const std::string& name);

}  // namespace tta::test
