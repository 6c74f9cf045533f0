#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MIDALIGN_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string last_line(const std::string& s) {
  const std::size_t end = s.find_last_not_of('\n');
  return s.substr(s.rfind('\n', end) + 1, end - s.rfind('\n', end));
}

// The replayable part of a metadata line: the command and its option echo.
std::string echoed_command(const std::string& meta) {
  const std::string key = "command=";
  std::string rest = meta.substr(meta.find(key) + key.size());
  std::string cmd;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    const std::size_t next = rest.find(' ', pos);
    const std::string tok = rest.substr(pos, next - pos);
    if (pos == 0 || tok.rfind("--", 0) == 0) cmd += (cmd.empty() ? "" : " ") + tok;
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return cmd;
}

}  // namespace

TEST_CASE("bifurcation output") {
  const Run r = run("--modes 8 bifurcation --gamma-lo 0.70 --gamma-hi 0.90 --steps 8");
  CHECK(r.status == 0);
  CHECK(first_line(r.out).rfind("gamma1,a1,a2,", 0) == 0);
  CHECK(first_line(r.out).find(",leading_eig,stable,converged") != std::string::npos);
  CHECK(last_line(r.out).rfind("# version=1.0.0 command=bifurcation", 0) == 0);
}

TEST_CASE("metadata line replays the run") {
  for (const char* args : {"--gamma1 0.835 bnk --nmax 5", "realline --line-noise gaussian:0.5 --points 129",
                           "--gamma1 0.85 particles --particles 100 --t-end 1 --replicas 2",
                           "--modes 8 bifurcation --steps 8", "--gamma1 0.9 --modes 8 evolve --t-end 1"}) {
    const Run r = run(args);
    REQUIRE(r.status == 0);
    const std::string cmd = echoed_command(last_line(r.out));
    CAPTURE(cmd);
    CHECK(run(cmd).out == r.out);
  }
}

TEST_CASE("usage and domain errors") {
  CHECK(run("stationary").status == 1);
  CHECK(run("bifurcation --steps 4").status == 1);
  CHECK(run("--kernel nonsense bifurcation").status != 0);
  CHECK(run("--noise list:/nonexistent/file bifurcation").status != 0);
}

TEST_CASE("stationary density") {
  const Run r = run("--gamma1 0.835 stationary --grid 64");
  CHECK(r.status == 0);
  CHECK(r.out.find("x,f,g") != std::string::npos);
}

TEST_CASE("bnk has no nontrivial root subcritically") {
  const Run r = run("--gamma1 0.7 bnk --nmax 5");
  CHECK(r.status == 0);
  CHECK(r.out.find("consistency_root=none") != std::string::npos);
  const Run s = run("--gamma1 0.835 bnk --nmax 5");
  CHECK(s.out.find("consistency_root=0.") != std::string::npos);
}

TEST_CASE("realline rectangular variance") {
  const Run r = run("realline --line-noise rect:1 --points 257");
  CHECK(r.status == 0);
  CHECK(r.out.find(",0.66666666") != std::string::npos);
}

TEST_CASE("particles are reproducible and config files are read") {
  const std::string args = "--gamma1 0.85 particles --particles 200 --t-end 2 --replicas 2";
  const Run a = run(args), b = run(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run("--seed 2 " + args).out);

  const std::string cfg = "test_cli_config.ini";
  std::ofstream(cfg) << "seed = 2\n";
  CHECK(run("--config " + cfg + " " + args).out == run("--seed 2 " + args).out);
  CHECK(run("--config " + cfg + " --seed 1 " + args).out == a.out);
}
