// Command line front end. Everything goes through the C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tta/tta_c.h"

namespace {

// Exit codes: a verdict was produced, the tool under test misbehaved, bad usage or input.
constexpr int kOk = 0;
constexpr int kToolFailures = 1;
constexpr int kUsage = 2;

struct InputError {
  std::string message;
};

void ok(tta_status s, const std::string& what) {
  if (s != TTA_OK) throw InputError{what + ": " + tta_status_name(s) + ": " + tta_last_error()};
}

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  tta_string_free(s);
  return out;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Automaton = Handle<tta_automaton, tta_automaton_free>;
using Tiled = Handle<tta_tiled, tta_tiled_free>;
using CheckResult = Handle<tta_check_result, tta_check_result_free>;
using Campaign = Handle<tta_campaign, tta_campaign_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError{"cannot write " + path.string()};
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    write_file(out_path, text);
}

bool is_tchecker_file(const std::string& path, const std::string& format) {
  if (format == "tchecker") return true;
  if (format == "ta") return false;
  return std::filesystem::path(path).extension() == ".tck";
}

void load_automaton(const std::string& path, const std::string& format, Automaton& a) {
  if (is_tchecker_file(path, format))
    ok(tta_automaton_parse_tchecker(read_file(path).c_str(), &a.p), path);
  else
    ok(tta_automaton_load(path.c_str(), &a.p), path);
}

struct GenOptions {
  std::uint64_t seed = 1;
  std::size_t depth = 4;
  double p_accept = 0.7;
  double stop = 0.25;
  std::int64_t c = -1;
  std::string library;

  void add(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--depth", depth, "Maximum tree depth")->check(CLI::PositiveNumber);
    cmd->add_option("--p-accept", p_accept, "Probability that a leaf is accepting")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--stop", stop, "Probability that a node above the depth bound is a leaf")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--c", c, "Ambient constant (default: largest constant of the library)");
    cmd->add_option("--library", library, "Tile library file (default: builtin)");
  }

  tta_gen_config config() const {
    tta_gen_config g;
    tta_gen_config_init(&g);
    g.seed = seed;
    g.max_depth = depth;
    g.accepting_leaf_probability = p_accept;
    g.stop_probability = stop;
    g.ambient_c = c;
    g.library_path = library.empty() ? nullptr : library.c_str();
    return g;
  }
};

int run_gen(const GenOptions& gen, std::size_t size, const std::string& out_dir, std::string name) {
  Tiled t;
  if (size) {
    ok(tta_tiled_generate_sized(gen.seed, size, gen.library.empty() ? nullptr : gen.library.c_str(), &t.p),
       "generation");
  } else {
    tta_gen_config g = gen.config();
    ok(tta_tiled_generate(&g, &t.p), "generation");
  }
  Automaton flat;
  ok(tta_tiled_flatten(t.p, &flat.p), "flattening");
  char* text = nullptr;
  ok(tta_tiled_text(t.p, &text), "serialisation");
  std::string tta_text = take(text);
  ok(tta_automaton_text(flat.p, &text), "serialisation");
  std::string ta_text = take(text);
  std::size_t n = 0;
  ok(tta_automaton_size(flat.p, &n), "size");

  if (name.empty()) name = "ptta-" + std::to_string(gen.seed);
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError{"cannot create " + out_dir + ": " + ec.message()};
  write_file(dir / (name + ".tta"), tta_text);
  write_file(dir / (name + ".ta"), ta_text);
  std::cout << "size=" << n << "\n";
  return kOk;
}

int run_flatten(const std::string& file, const std::string& out) {
  Tiled t;
  ok(tta_tiled_load(file.c_str(), &t.p), file);
  Automaton flat;
  ok(tta_tiled_flatten(t.p, &flat.p), "flattening");
  char* text = nullptr;
  ok(tta_automaton_text(flat.p, &text), "serialisation");
  emit(take(text), out);
  return kOk;
}

int run_check(const std::string& file, const std::string& format, bool fast) {
  Automaton a;
  load_automaton(file, format, a);
  CheckResult r;
  ok(tta_check(a.p, fast, &r.p), "check");
  std::cout << (tta_check_nonempty(r.p) ? "nonempty" : "empty") << "\n";
  for (std::size_t i = 0; i < tta_check_value_count(r.p); ++i) {
    const char* v = nullptr;
    int ne = 0;
    ok(tta_check_value(r.p, i, &v, &ne), "check");
    std::cout << "value " << v << " " << (ne ? "nonempty" : "empty") << "\n";
  }
  if (const char* at = tta_check_witness_value(r.p)) std::cout << "witness-value " << at << "\n";
  if (const char* w = tta_check_witness(r.p)) std::cout << "witness " << w << "\n";
  return kOk;
}

int run_oracle(const std::string& file) {
  Tiled t;
  ok(tta_tiled_load(file.c_str(), &t.p), file);
  char* intervals = nullptr;
  char* word = nullptr;
  ok(tta_tiled_oracle(t.p, &intervals, &word), "oracle");
  std::string set = take(intervals);
  std::string bits = take(word);
  std::cout << "intervals " << set << "\nword " << bits << "\n"
            << (bits.find('1') != std::string::npos ? "nonempty" : "empty") << "\n";
  return kOk;
}

struct HarnessOptions {
  GenOptions gen;
  std::size_t runs = 50;
  std::size_t workers = 0;
  std::string adapter = "internal";
  std::string command;
  bool per_value = false;
  bool full = false;
  double timeout = 60;
  std::string nonempty_pattern, empty_pattern, witness_pattern;
  bool no_measurements = false;
  std::string out_dir;
};

std::size_t workers_from_env() {
  const char* env = std::getenv("TTA_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  unsigned long n = std::strtoul(env, &end, 10);
  if (*end || n == 0) throw InputError{"TTA_WORKERS must be a positive integer"};
  return n;
}

int run_harness(const HarnessOptions& o) {
  tta_campaign_config cfg;
  tta_campaign_config_init(&cfg);
  cfg.gen = o.gen.config();
  cfg.runs = o.runs;
  cfg.workers = o.workers ? o.workers : workers_from_env();
  cfg.measurements = o.no_measurements ? 0 : 1;
  cfg.adapter = o.adapter.c_str();
  if (o.adapter == "external" && o.command.empty()) throw InputError{"the external adapter needs --command"};
  cfg.command = o.command.empty() ? nullptr : o.command.c_str();
  cfg.per_value = o.per_value;
  cfg.fast = o.full ? 0 : 1;
  cfg.timeout_seconds = o.timeout;
  if (!o.nonempty_pattern.empty()) cfg.nonempty_pattern = o.nonempty_pattern.c_str();
  if (!o.empty_pattern.empty()) cfg.empty_pattern = o.empty_pattern.c_str();
  if (!o.witness_pattern.empty()) cfg.witness_pattern = o.witness_pattern.c_str();

  Campaign c;
  ok(tta_campaign_run(&cfg, &c.p), "harness");
  std::string summary = tta_campaign_summary(c.p);
  if (o.out_dir.empty()) {
    std::cout << tta_campaign_csv(c.p);
  } else {
    std::filesystem::path dir(o.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError{"cannot create " + o.out_dir + ": " + ec.message()};
    write_file(dir / "harness.csv", tta_campaign_csv(c.p));
    write_file(dir / "summary.txt", summary);
  }
  std::cout << summary;
  return tta_campaign_failures(c.p) ? kToolFailures : kOk;
}

int run_priced_oracle(const std::string& file, bool brute) {
  Tiled t;
  ok(tta_tiled_load(file.c_str(), &t.p), file);
  char* v = nullptr;
  ok(tta_tiled_priced_oracle(t.p, &v), "priced oracle");
  std::cout << "oracle " << take(v) << "\n";
  if (brute) {
    ok(tta_tiled_priced_brute(t.p, &v), "brute force");
    std::cout << "brute " << take(v) << "\n";
  }
  return kOk;
}

int run_export(const std::string& file, const std::string& format, const std::string& value,
               const std::string& out) {
  Automaton a;
  load_automaton(file, format, a);
  int parametric = 0;
  ok(tta_automaton_is_parametric(a.p, &parametric), file);
  Automaton prepared;
  const tta_automaton* target = a.p;
  if (!value.empty()) {
    if (!parametric) throw InputError{"--value given but " + file + " has no parameter"};
    ok(tta_automaton_prepare(a.p, value.c_str(), &prepared.p), "substitution");
    target = prepared.p;
  } else if (parametric) {
    throw InputError{file + " is parametric; substitute a value first with --value"};
  }
  char* text = nullptr;
  ok(tta_automaton_export_tchecker(target, &text), "export");
  emit(take(text), out);
  return kOk;
}

int run_measure(const std::vector<std::size_t>& sizes, std::size_t instances, std::size_t repeat, std::uint64_t seed,
                bool fast) {
  char* csv = nullptr;
  ok(tta_measure(sizes.data(), sizes.size(), instances, repeat, seed, fast, &csv), "measure");
  std::string text = take(csv);
  std::cout << text;

  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<std::size_t, double>> totals;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    totals.emplace_back(std::stoul(f[0]), std::stod(f[3]));
  }
  for (std::size_t i = 1; i < totals.size(); ++i) {
    double ratio = totals[i - 1].second > 0 ? totals[i].second / totals[i - 1].second : 0;
    std::cout << "growth " << totals[i - 1].first << "->" << totals[i].first << " " << ratio << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oracle-based testing of emptiness checkers for one-parameter timed automata"};
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.require_subcommand(1);

  GenOptions gen;
  std::size_t gen_size = 0;
  std::string gen_dir = ".", gen_name;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a random tiled automaton and its flattening");
  gen.add(cmd_gen);
  cmd_gen->add_option("--size", gen_size, "Exact flattened size instead of a random tree");
  cmd_gen->add_option("--out-dir", gen_dir, "Directory for the generated files");
  cmd_gen->add_option("--name", gen_name, "Base file name (default: ptta-<seed>)");

  std::string file, out, format = "auto";
  auto* cmd_flatten = app.add_subcommand("flatten", "Flatten a tiled automaton");
  cmd_flatten->add_option("file", file, "Tiled automaton")->required();
  cmd_flatten->add_option("-o,--output", out, "Output file (default: stdout)");

  bool fast = false;
  auto* cmd_check = app.add_subcommand("check", "Decide emptiness of a (parametric) timed automaton");
  cmd_check->add_option("file", file, "Automaton file (.ta, or .tck in tChecker syntax)")->required();
  cmd_check->add_flag("--fast", fast, "Stop at the first accepting parameter value");
  cmd_check->add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "ta", "tchecker"}));

  auto* cmd_oracle = app.add_subcommand("oracle", "Predicted parameter intervals of a tiled automaton");
  cmd_oracle->add_option("file", file, "Tiled automaton")->required();

  HarnessOptions h;
  auto* cmd_harness = app.add_subcommand("harness", "Test an emptiness checker on generated automata");
  h.gen.add(cmd_harness);
  cmd_harness->add_option("--runs", h.runs, "Number of tests")->check(CLI::PositiveNumber);
  cmd_harness->add_option("--workers", h.workers, "Worker threads (default: TTA_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  cmd_harness->add_option("--adapter", h.adapter, "Tool under test")
      ->check(CLI::IsMember({"internal", "internal-full", "always-empty", "always-nonempty", "corrupt-witness",
                             "off-by-one", "external"}));
  cmd_harness->add_option("--command", h.command, "External checker command; {input} is the input file");
  cmd_harness->add_flag("--per-value", h.per_value,
                        "Check each representative value externally, in tChecker syntax");
  cmd_harness->add_flag("--full", h.full, "Check every representative value");
  cmd_harness->add_option("--timeout", h.timeout, "Seconds per external test")->check(CLI::PositiveNumber);
  cmd_harness->add_option("--nonempty-pattern", h.nonempty_pattern, "Regex for a non-empty answer");
  cmd_harness->add_option("--empty-pattern", h.empty_pattern, "Regex for an empty answer");
  cmd_harness->add_option("--witness-pattern", h.witness_pattern, "Regex extracting the witness");
  cmd_harness->add_flag("--no-measurements", h.no_measurements, "Write '-' for time and memory");
  cmd_harness->add_option("--out-dir", h.out_dir, "Write harness.csv and summary.txt here instead of stdout");

  bool brute = false;
  auto* cmd_priced = app.add_subcommand("priced-oracle", "Minimum-cost lower bound of a priced tiled automaton");
  cmd_priced->add_option("file", file, "Priced tiled automaton")->required();
  cmd_priced->add_flag("--brute", brute, "Also enumerate simple tile paths");

  std::string value;
  auto* cmd_export = app.add_subcommand("export-tchecker", "Write an automaton in tChecker syntax");
  cmd_export->add_option("file", file, "Automaton file")->required();
  cmd_export->add_option("--value", value, "Parameter value to substitute (n or n/d)");
  cmd_export->add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "ta", "tchecker"}));
  cmd_export->add_option("-o,--output", out, "Output file (default: stdout)");

  std::vector<std::size_t> sizes{19, 259, 499};
  std::size_t instances = 10;
  std::size_t repeat = 3;
  std::uint64_t seed = 1;
  auto* cmd_measure = app.add_subcommand("measure", "Total check time over a ladder of sizes");
  cmd_measure->add_option("--sizes", sizes, "Flattened sizes")->delimiter(',');
  cmd_measure->add_option("--instances", instances, "Instances per size")->check(CLI::PositiveNumber);
  cmd_measure->add_option("--repeat", repeat, "Rerun the ladder and keep the fastest total per size")
      ->check(CLI::PositiveNumber);
  cmd_measure->add_option("--seed", seed, "Random seed");
  cmd_measure->add_flag("--fast", fast, "Stop at the first accepting value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (cmd_gen->parsed()) return run_gen(gen, gen_size, gen_dir, gen_name);
    if (cmd_flatten->parsed()) return run_flatten(file, out);
    if (cmd_check->parsed()) return run_check(file, format, fast);
    if (cmd_oracle->parsed()) return run_oracle(file);
    if (cmd_harness->parsed()) return run_harness(h);
    if (cmd_priced->parsed()) return run_priced_oracle(file, brute);
    if (cmd_export->parsed()) return run_export(file, format, value, out);
    if (cmd_measure->parsed()) return run_measure(sizes, instances, repeat, seed, fast);
  } catch (const InputError& e) {
    std::cerr << "tta: " << e.message << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "tta: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
