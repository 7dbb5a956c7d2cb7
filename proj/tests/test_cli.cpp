#include "doctest.h"

#include "csck/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace csck;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path root;
  explicit Scratch(const std::string& name) : root(fs::temp_directory_path() / ("csck_cli_" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }

  fs::path write(const std::string& file, const std::string& text) const {
    std::ofstream(root / file) << text;
    return root / file;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::RunOutcome run(const std::string& command, const fs::path& config, const fs::path& out, std::uint64_t seed = 0) {
  cli::RunConfig rc;
  rc.command = command;
  rc.config_path = config;
  rc.output_dir = out;
  rc.seed = seed;
  rc.jobs = 2;
  rc.quiet = true;
  return cli::run(rc);
}

}  // namespace

TEST_CASE("polytope-check reports A = 6 on the simplex") {
  Scratch s("poly");
  const auto o = run("polytope-check", s.write("c.toml", "polytope = \"simplex\"\n"), s.root / "out");
  CHECK(o.exit_code == 0);
  CHECK(o.report["results"]["A"] == "6");
  CHECK(o.report["schema_version"] == cli::kSchemaVersion);
  CHECK(fs::exists(s.root / "out" / "report.json"));
  CHECK(fs::exists(s.root / "out" / "log.txt"));
  CHECK(slurp(s.root / "out" / "vertices.csv").rfind("x1,x2\n", 0) == 0);
}

TEST_CASE("stability-scan CSV rows are sorted by L_P") {
  Scratch s("scan");
  const auto cfg = s.write("c.toml", R"(polytope = "interval"
criterion = "K"
directions = [["1"]]
offsets = ["3/4", "1/4", "1/2", "1/8"]
)");
  const auto o = run("stability-scan", cfg, s.root / "out");
  REQUIRE(o.exit_code == 0);
  std::istringstream csv(slurp(s.root / "out" / "scan.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "direction,offset,L_P,int_abs_ftilde,ratio");
  // L_P column is an exact fraction p/q
  std::vector<double> lp;
  while (std::getline(csv, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    const auto slash = f[2].find('/');
    lp.push_back(slash == std::string::npos ? std::stod(f[2]) : std::stod(f[2].substr(0, slash)) / std::stod(f[2].substr(slash + 1)));
  }
  REQUIRE(lp.size() == 4);
  for (std::size_t i = 1; i < lp.size(); ++i) CHECK(lp[i - 1] <= lp[i]);
}

TEST_CASE("validation failures exit 3 with provenance") {
  Scratch s("bad");
  auto o = run("polytope-check", s.write("a.toml", "polytope = \"dodecagon\"\n"), s.root / "a");
  CHECK(o.exit_code == 3);
  CHECK(o.report["status"] == "error");
  CHECK(o.report["error"]["module"] == "polytope");
  CHECK(o.report["error"]["op"] == "standard_polytope");

  o = run("continuity", s.write("b.toml", "t_grid = [0.5, 0.3]\n"), s.root / "b");
  CHECK(o.exit_code == 3);
  o = run("energy", s.write("c.toml", "polytope = [1, 2\n"), s.root / "c");
  CHECK(o.exit_code == 3);
  o = run("polytope-check", s.root / "missing.toml", s.root / "d");
  CHECK(o.exit_code == 3);
  o = run("no-such-command", {}, s.root / "e");
  CHECK(o.exit_code == 3);
  o = run("epsgeo", s.write("f.toml", "eps = 0.1\n[[phi1.mode]]\nk1 = 1\ncoef = [3.0]\n"), s.root / "f");
  CHECK(o.exit_code == 3);
  CHECK(o.report["error"]["kind"] == "InadmissibleEndpoint");
}

TEST_CASE("non-convergence exits 2") {
  Scratch s("newton");
  const auto cfg = s.write("c.toml", R"(eps = 0.01
[grid]
m1 = 8
m2 = 8
nt = 8
[newton]
max_iter = 1
[[phi1.mode]]
k1 = 1
coef = [0.3]
)");
  const auto o = run("epsgeo", cfg, s.root / "out");
  CHECK(o.exit_code == 2);
  CHECK(o.report["error"]["kind"] == "NewtonDiverged");
  CHECK(o.report["error"]["module"] == "mabuchi_appendix");
}

TEST_CASE("continuity and epsgeo artifacts") {
  Scratch s("cont");
  auto o = run("continuity", s.write("c.toml", "t_grid = [0.5, 0.9]\n[grid]\nn = 256\n[recentring]\nc = 1.0\n"), s.root / "c");
  CHECK(o.exit_code == 0);
  CHECK(o.report["results"]["states"].size() == 2);
  CHECK(slurp(s.root / "c" / "path.csv").rfind("t,residual,newton_iters,shift,", 0) == 0);

  o = run("epsgeo", s.write("e.toml", "eps = 0.1\n[grid]\nm1 = 8\nm2 = 8\nnt = 8\n[[phi1.mode]]\nk1 = 1\ncoef = [0.2]\n"),
          s.root / "e");
  CHECK(o.exit_code == 0);
  CHECK(o.report["results"]["residual"].get<double>() <= 1e-9);
  CHECK(fs::exists(s.root / "e" / "path.json"));
  CHECK(fs::exists(s.root / "e" / "levels.csv"));
}

TEST_CASE("reports are byte-identical for a fixed seed and differ across seeds") {
  Scratch s("det");
  const auto cfg = s.write("c.toml", "[endpoint]\ncount = 20\n[rays]\ncount = 4\n[transplant]\ncount = 2\nn = 64\nk_max = 8\n");
  run("dp-suite", cfg, s.root / "a", 3);
  run("dp-suite", cfg, s.root / "b", 3);
  run("dp-suite", cfg, s.root / "c", 4);
  const auto a = slurp(s.root / "a" / "report.json"), b = slurp(s.root / "b" / "report.json"),
             c = slurp(s.root / "c" / "report.json");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a != c);
  CHECK(slurp(s.root / "a" / "checks.csv") == slurp(s.root / "b" / "checks.csv"));
}

TEST_CASE("default output directory follows CSCK_LAB_OUT") {
  Scratch s("env");
  ::setenv("CSCK_LAB_OUT", s.root.c_str(), 1);
  CHECK(cli::default_output_dir("energy") == s.root / "energy");
  const auto o = run("polytope-check", {}, {});
  CHECK(o.exit_code == 0);
  CHECK(fs::exists(s.root / "polytope-check" / "report.json"));
  ::unsetenv("CSCK_LAB_OUT");
  CHECK(cli::default_output_dir("energy") == fs::path("csck_lab_out") / "energy");
}
