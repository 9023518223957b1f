#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <regex>
#include <thread>

#include "tta/error.hpp"
#include "tta/harness.hpp"
#include "tta/tchecker.hpp"
#include "tta/text_format.hpp"

namespace tta {

namespace {

using Clock = std::chrono::steady_clock;

ToolAnswer from_emp(const EmpResult& r, std::vector<CallRecord> calls) {
  ToolAnswer a;
  a.empty = !r.nonempty;
  a.witness = r.witness;
  a.calls = std::move(calls);
  return a;
}

class InternalAdapter : public ToolAdapter {
 public:
  explicit InternalAdapter(bool fast) : fast_(fast) {}
  std::string name() const override { return fast_ ? "internal" : "internal-full"; }
  ToolAnswer run(const ParametricTA& flat) const override {
    std::vector<CallRecord> calls;
    EmpOptions opt;
    opt.fast = fast_;
    opt.on_call = [&](const CallRecord& c) { calls.push_back(c); };
    auto r = emp_check(flat, opt);
    return from_emp(r, std::move(calls));
  }

 private:
  bool fast_;
};

// Shortest lasso through the transition graph, guards ignored, whose cycle stays among
// locations of one tile (locations share the "<tile>." prefix) and passes an accepting one.
std::optional<Witness> structural_lasso(const TimedAutomaton& ta) {
  auto tile_of = [&](std::size_t l) { return ta.locations[l].name.substr(0, ta.locations[l].name.find('.')); };
  auto bfs = [&](std::size_t from, auto&& allowed) {
    std::vector<std::optional<std::size_t>> via(ta.locations.size());
    std::vector<char> seen(ta.locations.size(), 0);
    std::deque<std::size_t> queue{from};
    seen[from] = 1;
    while (!queue.empty()) {
      auto l = queue.front();
      queue.pop_front();
      for (std::size_t t = 0; t < ta.transitions.size(); ++t) {
        const auto& tr = ta.transitions[t];
        if (tr.src != l || !allowed(tr.dst)) continue;
        if (tr.dst == from && !via[from]) via[from] = t;
        if (seen[tr.dst]) continue;
        seen[tr.dst] = 1;
        via[tr.dst] = t;
        queue.push_back(tr.dst);
      }
    }
    return via;
  };
  auto trace = [&](const std::vector<std::optional<std::size_t>>& via, std::size_t from, std::size_t to) {
    std::vector<WitnessStep> steps;
    std::size_t l = to;
    do {
      std::size_t t = *via[l];
      steps.insert(steps.begin(), WitnessStep{t, 0});
      l = ta.transitions[t].src;
    } while (l != from);
    return steps;
  };
  auto reach = bfs(ta.initial, [](std::size_t) { return true; });
  for (std::size_t a = 0; a < ta.locations.size(); ++a) {
    if (!ta.locations[a].accepting || (a != ta.initial && !reach[a])) continue;
    const std::string tile = tile_of(a);
    auto back = bfs(a, [&](std::size_t l) { return tile_of(l) == tile; });
    if (!back[a]) continue;
    Witness w;
    if (a != ta.initial) w.prefix = trace(reach, ta.initial, a);
    w.cycle = trace(back, a, a);
    return w;
  }
  return std::nullopt;
}

class MutantAdapter : public ToolAdapter {
 public:
  explicit MutantAdapter(Mutant m) : m_(m) {}
  std::string name() const override {
    switch (m_) {
      case Mutant::AlwaysEmpty: return "always-empty";
      case Mutant::AlwaysNonEmpty: return "always-nonempty";
      case Mutant::CorruptWitness: return "corrupt-witness";
      case Mutant::OffByOne: return "off-by-one";
    }
    return "mutant";
  }
  ToolAnswer run(const ParametricTA& flat) const override {
    ToolAnswer a;
    switch (m_) {
      case Mutant::AlwaysEmpty:
      case Mutant::AlwaysNonEmpty:
        a.empty = m_ == Mutant::AlwaysEmpty;
        a.calls.push_back(CallRecord{});
        return a;
      case Mutant::CorruptWitness: {
        a = InternalAdapter(true).run(flat);
        if (a.empty) {
          // Claims an accepting lasso that ignores every guard.
          if (auto w = structural_lasso(flat.ta())) {
            a.empty = false;
            a.witness = w;
          }
        }
        return a;
      }
      case Mutant::OffByOne: {
        EmpOptions opt;
        opt.fast = true;
        opt.on_call = [&](const CallRecord& c) { a.calls.push_back(c); };
        opt.checker = [](const ParametricTA& p, const Rational& v) { return check_non_par_emptiness(p, v + Rational(1)); };
        auto r = emp_check(flat, opt);
        a.empty = !r.nonempty;
        a.witness = r.witness;
        return a;
      }
    }
    return a;
  }

 private:
  Mutant m_;
};

struct ProcessResult {
  bool timed_out = false;
  bool signalled = false;
  int exit_code = 0;
  std::string output;
  double seconds = 0;
  long peak_kbytes = 0;
};

// Runs `/bin/sh -c command` in its own process group, collecting standard output. The whole
// group is killed when the deadline passes.
ProcessResult run_process(const std::string& command, double timeout_seconds) {
  int pipefd[2];
  if (pipe2(pipefd, O_CLOEXEC) != 0) fail(ErrorKind::Io, "pipe failed");
  const auto start = Clock::now();
  pid_t pid = fork();
  if (pid < 0) fail(ErrorKind::Io, "fork failed");
  if (pid == 0) {
    setpgid(0, 0);
    dup2(pipefd[1], STDOUT_FILENO);
    int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) dup2(devnull, STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(pipefd[1]);
  ProcessResult r;
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_seconds));
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      r.timed_out = true;
      break;
    }
    pollfd p{pipefd[0], POLLIN, 0};
    int ready = poll(&p, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    ssize_t n = read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;  // end of output
    r.output.append(buf, static_cast<std::size_t>(n));
  }
  close(pipefd[0]);
  if (r.timed_out) kill(-pid, SIGKILL);
  int status = 0;
  rusage usage{};
  // Output closed early: the child may still run, so the deadline applies to the wait too.
  for (;;) {
    pid_t w = wait4(pid, &status, r.timed_out ? 0 : WNOHANG, &usage);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline) {
      r.timed_out = true;
      kill(-pid, SIGKILL);
      continue;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  r.peak_kbytes = usage.ru_maxrss;
  if (WIFSIGNALED(status)) r.signalled = true;
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string temp_input(const std::string& extension, const std::string& text) {
  static std::atomic<std::uint64_t> counter{0};
  auto path = std::filesystem::temp_directory_path() /
              ("tta-" + std::to_string(getpid()) + "-" + std::to_string(counter++) + extension);
  std::ofstream out(path);
  out << text;
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  return path.string();
}

std::string substitute_input(std::string command, const std::string& path) {
  const std::string key = "{input}";
  if (command.find(key) == std::string::npos) return command + " '" + path + "'";
  for (auto pos = command.find(key); pos != std::string::npos; pos = command.find(key, pos + path.size()))
    command.replace(pos, key.size(), path);
  return command;
}

struct ToolFailure {
  ToolStatus status;
  std::string diagnostic;
};

class ExternalAdapter : public ToolAdapter {
 public:
  explicit ExternalAdapter(ExternalConfig cfg)
      : cfg_(std::move(cfg)), nonempty_(cfg_.nonempty_pattern), empty_(cfg_.empty_pattern), witness_(cfg_.witness_pattern) {
    if (cfg_.command.empty()) fail(ErrorKind::Invalid, "external adapter needs a command");
    if (cfg_.timeout_seconds <= 0) fail(ErrorKind::Invalid, "external adapter needs a positive timeout");
  }
  std::string name() const override { return "external"; }

  ToolAnswer run(const ParametricTA& flat) const override {
    ToolAnswer a;
    try {
      if (cfg_.mode == ExternalConfig::Mode::Whole) {
        auto call = invoke(".ta", write_ta(flat.ta()), cfg_.timeout_seconds);
        a.calls.push_back(CallRecord{0, Rational(0), call.nonempty, call.seconds, call.peak_kbytes});
        a.empty = !call.nonempty;
        a.witness = call.witness;
        return a;
      }
      const auto start = Clock::now();
      EmpOptions opt;
      opt.fast = cfg_.fast;
      opt.checker = [&](const ParametricTA& p, const Rational& v) {
        double left = cfg_.timeout_seconds - std::chrono::duration<double>(Clock::now() - start).count();
        if (left <= 0) throw ToolFailure{ToolStatus::Timeout, "timed out after " + std::to_string(cfg_.timeout_seconds) + " s"};
        auto call = invoke(".tck", export_tchecker(prepare_for_check(p, v)), left);
        a.calls.push_back(CallRecord{a.calls.size(), v, call.nonempty, call.seconds, call.peak_kbytes});
        BuchiResult b;
        b.nonempty = call.nonempty;
        return b;
      };
      a.empty = !emp_check(flat, opt).nonempty;
    } catch (const ToolFailure& f) {
      a.status = f.status;
      a.diagnostic = f.diagnostic;
    }
    return a;
  }

 private:
  struct Call {
    bool nonempty = false;
    std::optional<Witness> witness;
    double seconds = 0;
    long peak_kbytes = 0;
  };

  Call invoke(const std::string& extension, const std::string& text, double timeout) const {
    const std::string path = temp_input(extension, text);
    ProcessResult r;
    try {
      r = run_process(substitute_input(cfg_.command, path), timeout);
    } catch (...) {
      std::filesystem::remove(path);
      throw;
    }
    std::filesystem::remove(path);
    if (r.timed_out) throw ToolFailure{ToolStatus::Timeout, "timed out after " + std::to_string(timeout) + " s"};
    if (r.signalled) throw ToolFailure{ToolStatus::Crashed, "tool killed by a signal"};
    Call c;
    c.seconds = r.seconds;
    c.peak_kbytes = r.peak_kbytes;
    if (std::regex_search(r.output, nonempty_)) {
      c.nonempty = true;
      std::smatch m;
      if (std::regex_search(r.output, m, witness_)) {
        try {
          c.witness = Witness::parse(m.str(0));
        } catch (const Error& e) {
          throw ToolFailure{ToolStatus::Crashed, std::string("unreadable witness: ") + e.what()};
        }
      }
    } else if (!std::regex_search(r.output, empty_)) {
      throw ToolFailure{ToolStatus::Crashed, "no verdict in tool output (exit code " + std::to_string(r.exit_code) + ")"};
    }
    return c;
  }

  ExternalConfig cfg_;
  std::regex nonempty_, empty_, witness_;
};

}  // namespace

std::unique_ptr<ToolAdapter> internal_adapter(bool fast) { return std::make_unique<InternalAdapter>(fast); }
std::unique_ptr<ToolAdapter> mutant_adapter(Mutant m) { return std::make_unique<MutantAdapter>(m); }
std::unique_ptr<ToolAdapter> external_adapter(const ExternalConfig& cfg) { return std::make_unique<ExternalAdapter>(cfg); }

std::unique_ptr<ToolAdapter> make_adapter(const std::string& name, const ExternalConfig& external) {
  if (name == "internal") return internal_adapter(true);
  if (name == "internal-full") return internal_adapter(false);
  if (name == "always-empty") return mutant_adapter(Mutant::AlwaysEmpty);
  if (name == "always-nonempty") return mutant_adapter(Mutant::AlwaysNonEmpty);
  if (name == "corrupt-witness") return mutant_adapter(Mutant::CorruptWitness);
  if (name == "off-by-one") return mutant_adapter(Mutant::OffByOne);
  if (name == "external") return external_adapter(external);
  fail(ErrorKind::Invalid, "unknown adapter '" + name + "'");
}

}  // namespace tta
