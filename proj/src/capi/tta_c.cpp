#include "tta/tta_c.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "tta/empcheck.hpp"
#include "tta/emptiness.hpp"
#include "tta/error.hpp"
#include "tta/harness.hpp"
#include "tta/intervals.hpp"
#include "tta/priced.hpp"
#include "tta/tchecker.hpp"
#include "tta/text_format.hpp"
#include "tta/tile_format.hpp"
#include "tta/tiles.hpp"

struct tta_automaton {
  tta::TimedAutomaton ta;
};

struct tta_tiled {
  tta::TiledTA tta;
};

struct tta_check_result {
  bool nonempty = false;
  bool exhaustive = false;
  std::vector<std::pair<std::string, bool>> values;
  std::string witness;
  std::string witness_value;
  bool has_witness = false;
};

struct tta_campaign {
  std::string csv;
  std::string summary;
  std::size_t tests = 0;
  std::size_t failures = 0;
  std::size_t timeouts = 0;
};

namespace {

thread_local std::string last_error;

tta_status record(tta_status s, const std::string& message) {
  last_error = message;
  return s;
}

tta_status from_kind(tta::ErrorKind k) {
  switch (k) {
    case tta::ErrorKind::Parse: return TTA_ERR_PARSE;
    case tta::ErrorKind::Invalid: return TTA_ERR_INVALID;
    case tta::ErrorKind::Unsupported: return TTA_ERR_UNSUPPORTED;
    case tta::ErrorKind::Limit: return TTA_ERR_LIMIT;
    case tta::ErrorKind::Io: return TTA_ERR_IO;
    case tta::ErrorKind::Internal: return TTA_ERR_INTERNAL;
  }
  return TTA_ERR_INTERNAL;
}

// Runs f, translating exceptions into status codes.
template <class F>
tta_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return TTA_OK;
  } catch (const tta::Error& e) {
    return record(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return record(TTA_ERR_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return record(TTA_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(TTA_ERR_INTERNAL, "unknown exception");
  }
}

tta_status null_argument() { return record(TTA_ERR_ARGUMENT, "null argument"); }

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tta::GenConfig to_gen(const tta_gen_config& c) {
  tta::GenConfig g;
  g.seed = c.seed;
  g.max_depth = c.max_depth;
  g.accepting_leaf_probability = c.accepting_leaf_probability;
  g.stop_probability = c.stop_probability;
  if (c.ambient_c >= 0) g.ambient_c = c.ambient_c;
  if (c.library_path) g.library = tta::load_tile_library(c.library_path);
  return g;
}

std::vector<tta::Tile> library_or_builtin(const char* path) {
  return path ? tta::load_tile_library(path) : std::vector<tta::Tile>{};
}

}  // namespace

extern "C" {

const char* tta_last_error(void) { return last_error.c_str(); }

const char* tta_status_name(tta_status s) {
  switch (s) {
    case TTA_OK: return "ok";
    case TTA_ERR_PARSE: return "parse error";
    case TTA_ERR_INVALID: return "invalid input";
    case TTA_ERR_UNSUPPORTED: return "unsupported";
    case TTA_ERR_LIMIT: return "limit exceeded";
    case TTA_ERR_IO: return "i/o error";
    case TTA_ERR_INTERNAL: return "internal error";
    case TTA_ERR_ARGUMENT: return "bad argument";
  }
  return "unknown status";
}

void tta_string_free(char* s) { std::free(s); }

tta_status tta_automaton_parse(const char* text, tta_automaton** out) {
  if (!text || !out) return null_argument();
  return guarded([&] { *out = new tta_automaton{tta::parse_ta(text)}; });
}

tta_status tta_automaton_load(const char* path, tta_automaton** out) {
  if (!path || !out) return null_argument();
  return guarded([&] { *out = new tta_automaton{tta::load_ta(path)}; });
}

tta_status tta_automaton_parse_tchecker(const char* text, tta_automaton** out) {
  if (!text || !out) return null_argument();
  return guarded([&] { *out = new tta_automaton{tta::import_tchecker(text)}; });
}

void tta_automaton_free(tta_automaton* a) { delete a; }

tta_status tta_automaton_size(const tta_automaton* a, size_t* out) {
  if (!a || !out) return null_argument();
  *out = a->ta.size();
  return TTA_OK;
}

tta_status tta_automaton_is_parametric(const tta_automaton* a, int* out) {
  if (!a || !out) return null_argument();
  *out = a->ta.is_parametric() ? 1 : 0;
  return TTA_OK;
}

tta_status tta_automaton_text(const tta_automaton* a, char** out) {
  if (!a || !out) return null_argument();
  return guarded([&] { *out = dup(tta::write_ta(a->ta)); });
}

tta_status tta_automaton_export_tchecker(const tta_automaton* a, char** out) {
  if (!a || !out) return null_argument();
  return guarded([&] { *out = dup(tta::export_tchecker(a->ta)); });
}

tta_status tta_automaton_prepare(const tta_automaton* a, const char* value, tta_automaton** out) {
  if (!a || !value || !out) return null_argument();
  return guarded([&] {
    auto pta = tta::ParametricTA::from(a->ta);
    *out = new tta_automaton{tta::prepare_for_check(pta, tta::Rational::parse(value))};
  });
}

tta_status tta_check(const tta_automaton* a, int fast, tta_check_result** out) {
  if (!a || !out) return null_argument();
  return guarded([&] {
    auto r = std::make_unique<tta_check_result>();
    if (a->ta.is_parametric()) {
      tta::EmpOptions opts;
      opts.fast = fast != 0;
      auto res = tta::emp_check(tta::ParametricTA::from(a->ta), opts);
      r->nonempty = res.nonempty;
      r->exhaustive = res.exhaustive;
      for (const auto& [v, ne] : res.verified) r->values.emplace_back(v.str(), ne);
      if (res.witness) {
        r->has_witness = true;
        r->witness = res.witness->str();
        if (res.witness_value) r->witness_value = res.witness_value->str();
      }
    } else {
      auto res = tta::buchi_emptiness(tta::scale_to_integers(a->ta).first);
      r->nonempty = res.nonempty;
      r->exhaustive = true;
      if (res.witness) {
        r->has_witness = true;
        r->witness = res.witness->str();
      }
    }
    *out = r.release();
  });
}

void tta_check_result_free(tta_check_result* r) { delete r; }
int tta_check_nonempty(const tta_check_result* r) { return r && r->nonempty ? 1 : 0; }
int tta_check_exhaustive(const tta_check_result* r) { return r && r->exhaustive ? 1 : 0; }
size_t tta_check_value_count(const tta_check_result* r) { return r ? r->values.size() : 0; }

tta_status tta_check_value(const tta_check_result* r, size_t i, const char** value, int* nonempty) {
  if (!r || !value || !nonempty) return null_argument();
  if (i >= r->values.size()) return record(TTA_ERR_ARGUMENT, "value index out of range");
  *value = r->values[i].first.c_str();
  *nonempty = r->values[i].second ? 1 : 0;
  return TTA_OK;
}

const char* tta_check_witness(const tta_check_result* r) {
  return r && r->has_witness ? r->witness.c_str() : nullptr;
}

const char* tta_check_witness_value(const tta_check_result* r) {
  return r && r->has_witness && !r->witness_value.empty() ? r->witness_value.c_str() : nullptr;
}

void tta_gen_config_init(tta_gen_config* cfg) {
  if (!cfg) return;
  tta::GenConfig d;
  cfg->seed = d.seed;
  cfg->max_depth = d.max_depth;
  cfg->accepting_leaf_probability = d.accepting_leaf_probability;
  cfg->stop_probability = d.stop_probability;
  cfg->ambient_c = -1;
  cfg->library_path = nullptr;
}

tta_status tta_tiled_generate(const tta_gen_config* cfg, tta_tiled** out) {
  if (!cfg || !out) return null_argument();
  return guarded([&] { *out = new tta_tiled{tta::generate_random_ptta(to_gen(*cfg))}; });
}

tta_status tta_tiled_generate_sized(uint64_t seed, size_t size, const char* library_path, tta_tiled** out) {
  if (!out) return null_argument();
  return guarded(
      [&] { *out = new tta_tiled{tta::generate_sized_ptta(seed, size, library_or_builtin(library_path))}; });
}

tta_status tta_tiled_load(const char* path, tta_tiled** out) {
  if (!path || !out) return null_argument();
  return guarded([&] { *out = new tta_tiled{tta::load_tta(path)}; });
}

void tta_tiled_free(tta_tiled* t) { delete t; }

tta_status tta_tiled_size(const tta_tiled* t, size_t* out) {
  if (!t || !out) return null_argument();
  return guarded([&] { *out = t->tta.size(); });
}

tta_status tta_tiled_text(const tta_tiled* t, char** out) {
  if (!t || !out) return null_argument();
  return guarded([&] { *out = dup(tta::write_tta(t->tta)); });
}

tta_status tta_tiled_flatten(const tta_tiled* t, tta_automaton** out) {
  if (!t || !out) return null_argument();
  return guarded([&] { *out = new tta_automaton{tta::flatten(t->tta)}; });
}

tta_status tta_tiled_oracle(const tta_tiled* t, char** intervals, char** word) {
  if (!t || !intervals || !word) return null_argument();
  return guarded([&] {
    auto set = tta::predict_intervals(t->tta);
    std::string w = tta::intervals_to_bits(set, t->tta.ambient_c).str();
    *intervals = dup(set.str());
    *word = dup(w);
  });
}

tta_status tta_tiled_priced_oracle(const tta_tiled* t, char** value) {
  if (!t || !value) return null_argument();
  return guarded([&] { *value = dup(tta::priced_oracle(t->tta).str()); });
}

tta_status tta_tiled_priced_brute(const tta_tiled* t, char** value) {
  if (!t || !value) return null_argument();
  return guarded([&] { *value = dup(tta::min_cost_brute(t->tta).str()); });
}

void tta_campaign_config_init(tta_campaign_config* cfg) {
  if (!cfg) return;
  tta_gen_config_init(&cfg->gen);
  tta::CampaignConfig d;
  tta::ExternalConfig e;
  cfg->runs = d.runs;
  cfg->workers = d.workers;
  cfg->measurements = d.measurements ? 1 : 0;
  cfg->adapter = "internal";
  cfg->command = nullptr;
  cfg->per_value = 0;
  cfg->fast = e.fast ? 1 : 0;
  cfg->timeout_seconds = e.timeout_seconds;
  cfg->nonempty_pattern = nullptr;
  cfg->empty_pattern = nullptr;
  cfg->witness_pattern = nullptr;
}

tta_status tta_campaign_run(const tta_campaign_config* cfg, tta_campaign** out) {
  if (!cfg || !out) return null_argument();
  if (cfg->runs == 0) return record(TTA_ERR_ARGUMENT, "runs must be at least 1");
  return guarded([&] {
    tta::ExternalConfig ext;
    if (cfg->command) ext.command = cfg->command;
    ext.mode = cfg->per_value ? tta::ExternalConfig::Mode::PerValue : tta::ExternalConfig::Mode::Whole;
    ext.fast = cfg->fast != 0;
    ext.timeout_seconds = cfg->timeout_seconds;
    if (cfg->nonempty_pattern) ext.nonempty_pattern = cfg->nonempty_pattern;
    if (cfg->empty_pattern) ext.empty_pattern = cfg->empty_pattern;
    if (cfg->witness_pattern) ext.witness_pattern = cfg->witness_pattern;
    std::string name = cfg->adapter ? cfg->adapter : "internal";
    if (name == "internal" && !cfg->fast) name = "internal-full";
    auto adapter = tta::make_adapter(name, ext);

    tta::CampaignConfig cc;
    cc.gen = to_gen(cfg->gen);
    cc.runs = cfg->runs;
    cc.workers = cfg->workers ? cfg->workers : 1;
    cc.measurements = cfg->measurements != 0;
    auto res = tta::run_campaign(*adapter, cc);

    auto c = std::make_unique<tta_campaign>();
    c->csv = std::move(res.csv);
    c->summary = res.summary.str();
    c->tests = res.summary.tests;
    c->failures = res.summary.failed.size();
    c->timeouts = res.summary.timeouts;
    *out = c.release();
  });
}

void tta_campaign_free(tta_campaign* c) { delete c; }
const char* tta_campaign_csv(const tta_campaign* c) { return c ? c->csv.c_str() : ""; }
const char* tta_campaign_summary(const tta_campaign* c) { return c ? c->summary.c_str() : ""; }
size_t tta_campaign_tests(const tta_campaign* c) { return c ? c->tests : 0; }
size_t tta_campaign_failures(const tta_campaign* c) { return c ? c->failures : 0; }
size_t tta_campaign_timeouts(const tta_campaign* c) { return c ? c->timeouts : 0; }

tta_status tta_measure(const size_t* sizes, size_t count, size_t instances, size_t repeat, uint64_t seed, int fast,
                       char** csv) {
  if (!sizes || !csv) return null_argument();
  if (count == 0 || instances == 0 || repeat == 0) return record(TTA_ERR_ARGUMENT, "empty size ladder");
  return guarded([&] {
    auto adapter = tta::internal_adapter(fast != 0);
    std::vector<std::size_t> ladder(sizes, sizes + count);
    auto points = tta::measure_ladder(ladder, instances, seed, *adapter);
    for (std::size_t r = 1; r < repeat; ++r) {
      auto again = tta::measure_ladder(ladder, instances, seed, *adapter);
      for (std::size_t i = 0; i < points.size(); ++i) {
        points[i].total_seconds = std::min(points[i].total_seconds, again[i].total_seconds);
        points[i].peak_kbytes = std::max(points[i].peak_kbytes, again[i].peak_kbytes);
      }
    }
    std::string text = "size,instances,calls,total_seconds,peak_kbytes\n";
    char buf[160];
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.6f,%ld\n", p.size, p.instances, p.calls, p.total_seconds,
                    p.peak_kbytes);
      text += buf;
    }
    *csv = dup(text);
  });
}

}  // extern "C"
