#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kData = COVERAGE_TEST_DATA_DIR;

struct Result {
  int code;
  std::string output;
};

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("coverage_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result cli(const std::string& args, const fs::path& dir) {
  const auto log = dir / "stdout.txt";
  const std::string cmd = std::string("\"") + COVERAGE_CLI_PATH + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  int code = status;
#ifdef WEXITSTATUS
  code = WEXITSTATUS(status);
#endif
  return {code, slurp(log)};
}

std::string tiny() { return "\"" + (kData / "tiny.json").string() + "\""; }

}  // namespace

TEST_CASE("validate subcommand passes") {
  const auto dir = scratch("validate");
  const auto r = cli("validate", dir);
  CHECK(r.code == 0);
  CHECK(r.output.find("FAIL") == std::string::npos);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("bad invocations fail") {
  const auto dir = scratch("bad");
  CHECK(cli("", dir).code != 0);
  CHECK(cli("run --no-such-flag " + tiny(), dir).code != 0);
  CHECK(cli("run /does/not/exist.json", dir).code != 0);

  auto r = cli("run \"" + (kData / "missing_coeffs.json").string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(r.output.find("environment.coeffs") != std::string::npos);

  r = cli("run \"" + (kData / "bad_key.json").string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(r.output.find("schedul") != std::string::npos);

  r = cli("run " + tiny() + " --set epsilon=-1", dir);
  CHECK(r.code == 2);
  CHECK(r.output.find("epsilon") != std::string::npos);
}

TEST_CASE("run writes trace and summary") {
  const auto dir = scratch("run");
  const auto r = cli("--out-dir \"" + dir.string() + "\" run " + tiny(), dir);
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["steps_executed"].get<long>() == 40);
  CHECK(summary["agents"].get<int>() == 4);
  std::istringstream trace(slurp(dir / "trace.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) ++lines;
  CHECK(lines == 42);
}

TEST_CASE("output is byte-reproducible and seed-sensitive") {
  const auto a = scratch("repro_a");
  const auto b = scratch("repro_b");
  const auto c = scratch("repro_c");
  REQUIRE(cli("--out-dir \"" + a.string() + "\" run " + tiny(), a).code == 0);
  REQUIRE(cli("--out-dir \"" + b.string() + "\" run " + tiny(), b).code == 0);
  REQUIRE(cli("--seed 99 --out-dir \"" + c.string() + "\" run " + tiny(), c).code == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  CHECK(slurp(a / "trace.csv") != slurp(c / "trace.csv"));
}

TEST_CASE("thread count does not change results") {
  const auto a = scratch("threads_a");
  const auto b = scratch("threads_b");
  REQUIRE(cli("--threads 1 --out-dir \"" + a.string() + "\" run " + tiny(), a).code == 0);
  REQUIRE(cli("--threads 3 --out-dir \"" + b.string() + "\" run " + tiny(), b).code == 0);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
}

TEST_CASE("sweep row matches a plain run") {
  const auto s = scratch("sweep");
  const auto r = scratch("sweep_run");
  REQUIRE(cli("--out-dir \"" + s.string() + "\" sweep " + tiny() +
                  " --param epsilon --values 0.1,0.3 --jobs 2",
              s).code == 0);
  REQUIRE(cli("--out-dir \"" + r.string() + "\" run " + tiny() + " --set epsilon=0.3", r).code ==
          0);
  std::istringstream table(slurp(s / "sweep.csv"));
  std::string header, row1, row2;
  std::getline(table, header);
  std::getline(table, row1);
  std::getline(table, row2);
  CHECK(header == "epsilon,converged_at_step,final_cost_conventional");
  CHECK(row1.rfind("0.1,", 0) == 0);
  const auto summary = nlohmann::json::parse(slurp(r / "summary.json"));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", summary["final_cost_conventional"].get<double>());
  CHECK(row2.substr(row2.rfind(',') + 1) == buf);
}

TEST_CASE("compare writes both traces") {
  const auto dir = scratch("compare");
  REQUIRE(cli("--out-dir \"" + dir.string() + "\" compare " + tiny(), dir).code == 0);
  CHECK(fs::exists(dir / "trace_proposed.csv"));
  CHECK(fs::exists(dir / "trace_lloyd.csv"));
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary["proposed"]["method"] == "proposed");
  CHECK(summary["lloyd"]["method"] == "lloyd");
  CHECK(summary["comparison"].contains("proposed_lower_cost"));
  // identical starting rows
  std::istringstream p(slurp(dir / "trace_proposed.csv"));
  std::istringstream l(slurp(dir / "trace_lloyd.csv"));
  std::string hp, hl, rp, rl;
  std::getline(p, hp);
  std::getline(l, hl);
  std::getline(p, rp);
  std::getline(l, rl);
  auto positions = [](const std::string& row) {
    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    return std::vector<std::string>(cells.begin() + 6, cells.begin() + 14);
  };
  CHECK(positions(rp) == positions(rl));
}

TEST_CASE("export-grid") {
  const auto dir = scratch("grid");
  REQUIRE(cli("--out-dir \"" + dir.string() + "\" export-grid " + tiny(), dir).code == 0);
  std::istringstream grid(slurp(dir / "grid.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(grid, line)) ++lines;
  CHECK(lines == 901);
  const auto basis = nlohmann::json::parse(slurp(dir / "basis.json"));
  CHECK(basis["basis"]["means"].size() == 25);
}
