#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tta/empcheck.hpp"
#include "tta/intervals.hpp"
#include "tta/tiles.hpp"

namespace tta {

// Random tree-shaped tiled automata. Every internal node is a non-accepting tile spawning one
// or two children from its outputs; leaves are accepting tiles with probability
// accepting_leaf_probability, dead ends otherwise.
struct GenConfig {
  std::uint64_t seed = 1;
  std::vector<Tile> library;  // empty: the builtin library
  std::size_t max_depth = 4;
  double accepting_leaf_probability = 0.7;
  double stop_probability = 0.25;  // chance that a node above max_depth is a leaf
  std::optional<std::int64_t> ambient_c;  // default: largest constant of the library
  std::size_t retries = 8;                // tile resamples before a branch is pruned
};

TiledTA generate_random_ptta(const GenConfig& cfg);

// A tree whose flattening has exactly `target` locations plus transitions, when reachable.
TiledTA generate_sized_ptta(std::uint64_t seed, std::size_t target, const std::vector<Tile>& library = {});

// Union over simple paths from the initial tile to accepting tiles of the intersection of the
// declared sets met along the way.
IntervalSet predict_intervals(const TiledTA& tta);

struct TilePath {
  std::vector<std::size_t> tiles;
  std::vector<std::string> letters;
};

// Tile sequence visited by a lasso of the flattening. The cycle has to stay inside one
// accepting tile and pass an accepting location.
TilePath witness_to_tile_path(const TiledTA& tta, const Flattening& flat, const Witness& witness);

enum class ToolStatus { Ok, Timeout, Crashed };

struct ToolAnswer {
  ToolStatus status = ToolStatus::Ok;
  bool empty = true;
  std::optional<Witness> witness;
  std::vector<CallRecord> calls;
  std::string diagnostic;
};

class ToolAdapter {
 public:
  virtual ~ToolAdapter() = default;
  virtual std::string name() const = 0;
  virtual ToolAnswer run(const ParametricTA& flat) const = 0;
};

enum class Mutant { AlwaysEmpty, AlwaysNonEmpty, CorruptWitness, OffByOne };

std::unique_ptr<ToolAdapter> internal_adapter(bool fast = true);
std::unique_ptr<ToolAdapter> mutant_adapter(Mutant m);

struct ExternalConfig {
  // Shell command; {input} is replaced by the path of the input file.
  std::string command;
  // Whole: one call on the parametric automaton in the text format.
  // PerValue: the representative loop runs here and each value is exported in tChecker syntax.
  enum class Mode { Whole, PerValue } mode = Mode::Whole;
  double timeout_seconds = 60;
  std::string nonempty_pattern = "(^|\\n)nonempty";
  std::string empty_pattern = "(^|\\n)empty";
  std::string witness_pattern = "prefix:[^\\n]*";
  bool fast = true;
};

std::unique_ptr<ToolAdapter> external_adapter(const ExternalConfig& cfg);

// "internal", "internal-full", "always-empty", "always-nonempty", "corrupt-witness",
// "off-by-one", or "external" (configured by `external`).
std::unique_ptr<ToolAdapter> make_adapter(const std::string& name, const ExternalConfig& external = {});

enum class VerdictMode { WitnessChecked, NonZeroWordsChecked, ToolError };

struct Verdict {
  bool passed = false;
  VerdictMode mode = VerdictMode::ToolError;
  ToolStatus status = ToolStatus::Ok;
  bool tool_empty = true;
  bool oracle_nonempty = false;
  BitWord oracle_word;
  IntervalSet oracle_intervals;
  std::optional<TilePath> path;
  std::vector<CallRecord> calls;  // at least one entry
  std::string diagnostic;

  std::string label() const;  // pass, fail, timeout or crash
};

Verdict test_tool(const ToolAdapter& adapter, const TiledTA& tta);

struct CampaignConfig {
  GenConfig gen;  // gen.seed is the campaign seed; test i uses seed + i
  std::size_t runs = 50;
  std::size_t workers = 1;
  bool measurements = true;  // false writes "-" in the time and memory columns
};

struct TestRecord {
  std::size_t id = 0;
  std::uint64_t seed = 0;
  std::size_t size = 0;
  Verdict verdict;
};

struct CampaignSummary {
  std::size_t tests = 0;
  std::size_t max_size = 0;
  std::size_t nonempty = 0;
  std::size_t empty = 0;
  std::size_t passed = 0;
  std::size_t timeouts = 0;
  std::vector<std::size_t> failed;

  double accuracy() const { return tests ? 100.0 * static_cast<double>(passed) / static_cast<double>(tests) : 0; }
  std::string str() const;
};

struct CampaignResult {
  std::vector<TestRecord> records;
  CampaignSummary summary;
  std::string csv;
};

CampaignResult run_campaign(const ToolAdapter& adapter, const CampaignConfig& cfg);

// Total checker time for a group of same-size instances.
struct MeasurePoint {
  std::size_t size = 0;
  std::size_t instances = 0;
  std::size_t calls = 0;
  double total_seconds = 0;
  long peak_kbytes = 0;
};

std::vector<MeasurePoint> measure_ladder(const std::vector<std::size_t>& sizes, std::size_t instances,
                                         std::uint64_t seed, const ToolAdapter& adapter);

}  // namespace tta
