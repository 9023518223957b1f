#include "support/fixtures.hpp"

#include "tta/text_format.hpp"

namespace tta::test {

std::string fixture_path(const std::string& name) { return std::string(TTA_FIXTURE_DIR) + "/" + name; }

TimedAutomaton load_fixture_ta(const std::string& name) { return load_ta(fixture_path(name)); }

}  // namespace tta::test
