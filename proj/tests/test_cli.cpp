#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* p = std::getenv("MEDDISPATCH_CLI");
  return p ? p : "";
}

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "meddispatch_cli_test.log";
  const std::string cmd = "\"" + cli() + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream s;
  s << in.rdbuf();
  r.out = s.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workspace {
  fs::path dir = fs::temp_directory_path() / "meddispatch_cli_ws";
  Workspace() {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return "\"" + (dir / name).string() + "\""; }
};

}  // namespace

TEST_CASE("command-line workflow") {
  REQUIRE_FALSE(cli().empty());
  const Workspace ws;

  Result r = run("gen-network-fixture -o " + ws.path("ohio"));
  REQUIRE(r.code == 0);
  CHECK(fs::exists(ws.dir / "ohio" / "scenario.json"));
  const std::string cfg = ws.path("ohio/scenario.json");

  r = run("validate -c " + cfg);
  CHECK(r.code == 0);
  CHECK(r.out.find("MainCampus -> BKL") != std::string::npos);
  CHECK(r.out.find("LorainFHC -> LPR") != std::string::npos);

  r = run("dispatch -c " + cfg + " --request-count 20 -o " + ws.path("run1"));
  CHECK(r.code == 0);
  CHECK(r.out.find("audit violations 0") != std::string::npos);
  r = run("dispatch -c " + cfg + " --request-count 20 -o " + ws.path("run2"));
  CHECK(r.code == 0);
  for (const char* f : {"requests.csv", "legs.csv", "summary.json"}) {
    CHECK(slurp(ws.dir / "run1" / f) == slurp(ws.dir / "run2" / f));
  }

  r = run("gen-demand -c " + cfg + " --request-count 8 --seed 3 --out " + ws.path("r.csv"));
  CHECK(r.code == 0);
  r = run("dispatch -c " + cfg + " --requests " + ws.path("r.csv") + " --algorithm baseline --wt 5 -o " +
          ws.path("run3"));
  CHECK(r.code == 0);
  CHECK(slurp(ws.dir / "run3" / "summary.json").find("\"algorithm\": \"baseline\"") != std::string::npos);

  r = run("compare -c " + cfg + " --request-count 6 --configurations 1,4 --baseline -o " + ws.path("cmp"));
  CHECK(r.code == 0);
  CHECK(fs::exists(ws.dir / "cmp" / "comparison.csv"));
  CHECK(fs::exists(ws.dir / "cmp" / "config4_wt10_wc1" / "baseline" / "legs.csv"));

  r = run("gap -c " + cfg + " --request-count 6 --configurations 2 -o " + ws.path("gap"));
  CHECK(r.code == 0);
  CHECK(fs::exists(ws.dir / "gap" / "gap.csv"));

  r = run("bench -c " + cfg + " --request-count 5 --sizes 3,6 --algorithms m2dh --repeats 1 -o " + ws.path("b"));
  CHECK(r.code == 0);
  CHECK(fs::exists(ws.dir / "b" / "environment.json"));
}

TEST_CASE("command-line errors") {
  REQUIRE_FALSE(cli().empty());
  const Workspace ws;
  REQUIRE(run("gen-network-fixture --fixture single-vertiport -o " + ws.path("sv")).code == 0);
  const std::string cfg = ws.path("sv/scenario.json");

  CHECK(run("").code == 2);
  CHECK(run("dispatch --bogus").code == 2);
  CHECK(run("dispatch -c " + ws.path("missing.json")).code == 2);
  CHECK(run("dispatch -c " + cfg + " --configuration 7").code == 2);
  CHECK(run("dispatch -c " + cfg + " --wt 0 --wc 0").code == 2);
  CHECK(run("dispatch -c " + cfg + " --algorithm genetic").code == 2);
  CHECK(run("gen-network-fixture --fixture mars -o " + ws.path("m")).code == 2);

  std::ofstream(ws.dir / "bad.csv") << "id,kind,origin,destination,ready_minute,deadline_minute\n"
                                    << "R1,patient,North,North,1,50\n";
  const Result bad = run("dispatch -c " + cfg + " --requests " + ws.path("bad.csv"));
  CHECK(bad.code == 2);
  CHECK(bad.out.find(":2") != std::string::npos);

  const Result gap = run("gap -c " + cfg + " --request-count 10 --configurations 4 -o " + ws.path("g"));
  CHECK(gap.code == 0);
  CHECK(gap.out.find("0.00 (0.00)") != std::string::npos);
}
