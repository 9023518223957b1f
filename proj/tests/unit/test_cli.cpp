#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "support/fixtures.hpp"
#include "tta/harness.hpp"
#include "tta/text_format.hpp"
#include "tta/tile_format.hpp"
#include "tta/tiles.hpp"

using namespace tta;
namespace fs = std::filesystem;

namespace {

struct Run {
  int exit = -1;
  std::string out;
};

// Runs the command line tool with `args`; stderr is discarded.
Run cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + TTA_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return test::fixture_path(name); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("tta-cli-" + std::to_string(getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen writes two files and is reproducible") {
    TempDir a, b;
    Run r1 = cli("gen --seed 1 --depth 1 --out-dir " + a.str());
    Run r2 = cli("gen --seed 1 --depth 1 --out-dir " + b.str());
    REQUIRE(r1.exit == 0);
    REQUIRE(r2.exit == 0);
    CHECK(r1.out == r2.out);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a.path)) {
      ++files;
      CHECK(slurp(e.path()) == slurp(b.path / e.path().filename()));
    }
    CHECK(files == 2);
    CHECK(fs::exists(a.path / "ptta-1.tta"));
    CHECK(fs::exists(a.path / "ptta-1.ta"));
    auto tta = load_tta((a.path / "ptta-1.tta").string());
    CHECK(tta.tiles.size() == 1);
  }

  TEST_CASE("gen reports the flattened size") {
    TempDir d;
    Run r = cli("gen --seed 7 --depth 4 --c 10 --name t --out-dir " + d.str());
    REQUIRE(r.exit == 0);
    auto tta = load_tta((d.path / "t.tta").string());
    auto flat = flatten(tta);
    CHECK(r.out == "size=" + std::to_string(flat.locations.size() + flat.transitions.size()) + "\n");
    CHECK(tta.ambient_c == 10);
  }

  TEST_CASE("gen with an exact size") {
    TempDir d;
    Run r = cli("gen --seed 2 --size 60 --out-dir " + d.str());
    REQUIRE(r.exit == 0);
    CHECK(r.out == "size=60\n");
  }

  TEST_CASE("gen rejects a missing library") {
    TempDir d;
    Run r = cli("gen --seed 1 --library /nonexistent/lib.tiles --out-dir " + d.str());
    CHECK(r.exit == 2);
    CHECK(fs::is_empty(d.path));
  }

  TEST_CASE("check lists verified values") {
    Run r = cli("check " + fixture("mu_cycle.ta"));
    REQUIRE(r.exit == 0);
    std::istringstream in(r.out);
    std::string first;
    std::getline(in, first);
    CHECK(first == "nonempty");
    CHECK(r.out.find("\nvalue 0 empty\n") != std::string::npos);
    CHECK(r.out.find("\nvalue 1/2 empty\n") != std::string::npos);
    CHECK(r.out.find("\nwitness prefix:") != std::string::npos);

    Run fast = cli("check --fast " + fixture("mu_cycle.ta"));
    REQUIRE(fast.exit == 0);
    std::size_t values = 0;
    for (std::size_t p = 0; (p = fast.out.find("\nvalue ", p)) != std::string::npos; ++p) ++values;
    CHECK(values == 1);
    CHECK(fast.out.find("nonempty\nvalue ") == 0);
  }

  TEST_CASE("empty verdicts exit with 0") {
    Run r = cli("check " + fixture("contradiction.ta"));
    CHECK(r.exit == 0);
    CHECK(r.out.rfind("empty\n", 0) == 0);
    CHECK(r.out.find("witness") == std::string::npos);
  }

  TEST_CASE("input errors exit with 2") {
    TempDir d;
    std::ofstream(d.path / "bad.ta") << "clock x\nlocation\nedge q0\n";
    CHECK(cli("check " + (d.path / "bad.ta").string()).exit == 2);
    CHECK(cli("check /nonexistent/file.ta").exit == 2);
    CHECK(cli("check").exit == 2);
    CHECK(cli("no-such-command").exit == 2);
    CHECK(cli("harness --runs 0").exit == 2);
    CHECK(cli("harness --adapter external").exit == 2);
    CHECK(cli("--help").exit == 0);
  }

  TEST_CASE("check reads tChecker input") {
    Run r = cli("check " + fixture("mu_cycle_at_2.tck"));
    REQUIRE(r.exit == 0);
    CHECK(r.out.rfind("nonempty\n", 0) == 0);
    Run loop = cli("check " + fixture("selfloop.tck"));
    CHECK(loop.out.rfind("nonempty\n", 0) == 0);
  }

  TEST_CASE("flatten matches the library flattening") {
    Run r = cli("flatten " + fixture("tree10.tta"));
    REQUIRE(r.exit == 0);
    CHECK(r.out == write_ta(flatten(load_tta(fixture("tree10.tta")))));
  }

  TEST_CASE("oracle prints intervals and the bit word") {
    Run r = cli("oracle " + fixture("tree10.tta"));
    REQUIRE(r.exit == 0);
    auto tta = load_tta(fixture("tree10.tta"));
    auto set = predict_intervals(tta);
    CHECK(r.out == "intervals " + set.str() + "\nword " + intervals_to_bits(set, tta.ambient_c).str() +
                       "\nnonempty\n");
    CHECK(r.out.rfind("intervals (0, 1/2] \xe2\x88\xaa (2, 4]\n", 0) == 0);
  }

  TEST_CASE("harness with the internal checker is fully accurate") {
    Run r = cli("harness --seed 11 --runs 50 --workers 2 --no-measurements");
    CHECK(r.exit == 0);
    CHECK(r.out.find("#Tests 50\n") != std::string::npos);
    CHECK(r.out.find("Accuracy 100.0%\n") != std::string::npos);
    CHECK(r.out.rfind("test_id,seed,size,call_index,wall_seconds,peak_kbytes,verdict\n", 0) == 0);
  }

  TEST_CASE("harness reports a planted fault") {
    Run r = cli("harness --seed 1 --runs 30 --adapter always-empty --no-measurements");
    CHECK(r.exit == 1);
    CHECK(r.out.find("Accuracy 100.0%") == std::string::npos);
    CHECK(r.out.find("Failed ") != std::string::npos);
  }

  TEST_CASE("harness tags timeouts") {
    Run r = cli("harness --seed 1 --runs 2 --adapter external --command 'sleep 5 # {input}' --timeout 1 --no-measurements");
    CHECK(r.exit == 1);
    CHECK(r.out.find(",timeout\n") != std::string::npos);
    CHECK(r.out.find("Timeout 2\n") != std::string::npos);
  }

  TEST_CASE("harness csv is independent of workers") {
    TempDir a, b;
    REQUIRE(cli("harness --seed 5 --runs 20 --no-measurements --out-dir " + a.str()).exit == 0);
    REQUIRE(cli("harness --seed 5 --runs 20 --no-measurements --out-dir " + b.str(), "TTA_WORKERS=3").exit == 0);
    CHECK(slurp(a.path / "harness.csv") == slurp(b.path / "harness.csv"));
    CHECK(slurp(a.path / "summary.txt") == slurp(b.path / "summary.txt"));
    CHECK(cli("harness --runs 1", "TTA_WORKERS=zero").exit == 2);
  }

  TEST_CASE("harness reads options from a config file") {
    TempDir d;
    std::ofstream(d.path / "campaign.toml") << "[harness]\nseed = 3\nruns = 4\nno-measurements = true\n";
    Run r = cli("--config " + (d.path / "campaign.toml").string() + " harness");
    Run direct = cli("harness --seed 3 --runs 4 --no-measurements");
    CHECK(r.exit == 0);
    CHECK(r.out.find("#Tests 4\n") != std::string::npos);
    CHECK(r.out == direct.out);
  }

  TEST_CASE("harness drives the command line checker as an external tool") {
    std::string cmd = std::string("'") + TTA_CLI_PATH + " check {input}'";
    Run r = cli("harness --seed 21 --runs 5 --depth 3 --adapter external --command " + cmd);
    CHECK(r.exit == 0);
    CHECK(r.out.find("Accuracy 100.0%") != std::string::npos);
  }

  TEST_CASE("priced oracle") {
    Run r = cli("priced-oracle --brute " + fixture("priced_diamond.tta"));
    REQUIRE(r.exit == 0);
    CHECK(r.out == "oracle 11\nbrute 11\n");
  }

  TEST_CASE("export-tchecker") {
    Run refused = cli("export-tchecker " + fixture("mu_cycle.ta"));
    CHECK(refused.exit == 2);
    CHECK(refused.out.empty());

    Run at2 = cli("export-tchecker --value 2 " + fixture("mu_cycle.ta"));
    REQUIRE(at2.exit == 0);
    CHECK(at2.out == slurp(fixture("mu_cycle_at_2.tck")));

    Run loop = cli("export-tchecker " + fixture("selfloop.tck"));
    REQUIRE(loop.exit == 0);
    CHECK(loop.out == slurp(fixture("selfloop.tck")));

    TempDir d;
    REQUIRE(cli("export-tchecker --value 1/2 -o " + (d.path / "half.tck").string() + " " + fixture("mu_cycle.ta"))
                .exit == 0);
    Run check = cli("check " + (d.path / "half.tck").string());
    CHECK(check.out.rfind("empty\n", 0) == 0);
  }

  TEST_CASE("measure prints one row per size") {
    Run r = cli("measure --sizes 19,60 --instances 1 --fast");
    REQUIRE(r.exit == 0);
    CHECK(r.out.rfind("size,instances,calls,total_seconds,peak_kbytes\n19,1,", 0) == 0);
    CHECK(r.out.find("\n60,1,") != std::string::npos);
    CHECK(r.out.find("\ngrowth 19->60 ") != std::string::npos);
  }
}
