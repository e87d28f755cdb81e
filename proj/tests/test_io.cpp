#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qgraph/io.hpp"

using namespace qgraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qgraph-test-io-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream s(line);
  while (std::getline(s, cell, sep)) out.push_back(cell);
  return out;
}

RunConfig small_ensemble(const fs::path& dir, const std::string& cls) {
  RunConfig c;
  c.command = "ensemble";
  c.topology = cls;
  c.samples = 6;
  c.seed = 5;
  c.states = 20;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("config round trip") {
  RunConfig c;
  c.command = "scan";
  c.scan_kind = "delta";
  c.g = {0.5, -1.25};
  c.s0 = {0.3};
  c.seed = 123456789012345ULL;
  c.max_failure_rate = 0.125;
  const auto back = RunConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  // a manifest is accepted as a config
  const auto m = manifest_json(c);
  CHECK(m.at("version") == kVersion);
  CHECK(RunConfig::from_json(m).to_json() == c.to_json());
}

TEST_CASE("config errors name the key") {
  auto message = [](const nlohmann::json& j) {
    try {
      (void)RunConfig::from_json(j);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message({{"sampels", 10}}).find("/sampels") != std::string::npos);
  CHECK(message({{"samples", "ten"}}).find("samples") != std::string::npos);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("validation") {
  RunConfig c;
  c.command = "ensemble";
  c.topology = "hexagon";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.topology = "3-star";
  CHECK_NOTHROW(c.validate());
  c.states = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.states = 30;
  c.formats = {"xml"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RunConfig s;
  s.command = "scan";
  s.scan_kind = "delta";
  s.s0 = {1.2};
  CHECK_THROWS_AS(s.validate(), ConfigError);
  RunConfig v;
  v.command = "solve";
  CHECK_THROWS_AS(v.validate(), ConfigError);
}

TEST_CASE("run directory labels") {
  RunConfig c;
  c.command = "ensemble";
  c.topology = "bull";
  c.seed = 3;
  c.samples = 100;
  ::setenv("QGRAPH_OUTPUT_DIR", "/tmp/runs", 1);
  CHECK(c.run_dir() == fs::path("/tmp/runs/ensemble-bull-seed3-n100"));
  ::unsetenv("QGRAPH_OUTPUT_DIR");
  CHECK(c.run_dir() == fs::path("qgraph-runs/ensemble-bull-seed3-n100"));
  c.output_dir = "/elsewhere";
  CHECK(c.run_dir() == fs::path("/elsewhere"));
}

TEST_CASE("doubles round trip through text") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.57920000000000005}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_sig3(0.57923) == "0.579");
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto dir = scratch("atomic");
  write_atomic(dir / "nested" / "a.txt", "one");
  write_atomic(dir / "nested" / "a.txt", "two");
  CHECK(slurp(dir / "nested" / "a.txt") == "two");
  CHECK_FALSE(fs::exists(dir / "nested" / "a.txt.tmp"));
}

TEST_CASE("record columns are frozen") {
  const auto cols = record_columns(2, 1);
  CHECK(cols.front() == "id");
  CHECK(cols[1] == "ok");
  CHECK(cols[2] == "x0");
  CHECK(cols[5] == "y1");
  CHECK(cols.back() == "error");
  EnsembleRecord r;
  r.id = 3;
  r.ok = true;
  r.positions = {{0, 0}, {1, 0}};
  r.potentials = {0, 0};
  r.edge_lengths = {1};
  r.edge_angles = {0};
  r.wavenumbers = {3.14};
  const auto csv = records_csv({r});
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() == 2);
  CHECK(split(lines[0], ',').size() == cols.size());
  CHECK(split(lines[1] + " ", ',').size() == cols.size());
}

TEST_CASE("ensemble run writes its outputs and replays byte for byte") {
  const auto dir = scratch("ensemble");
  const auto c = small_ensemble(dir / "a", "3-star");
  const auto r = run_ensemble(c);
  for (const char* f : {"manifest.json", "records.csv", "records.json", "traces.csv", "summary.json"}) {
    CHECK(fs::exists(r.dir / f));
  }
  auto replay = RunConfig::load((r.dir / "manifest.json").string());
  replay.output_dir = (dir / "b").string();
  run_ensemble(replay);
  CHECK(slurp(dir / "a" / "records.csv") == slurp(dir / "b" / "records.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
}

TEST_CASE("failure budget") {
  const auto dir = scratch("budget");
  auto c = small_ensemble(dir / "run", "wire");
  c.max_failure_rate = 0.0;
  CHECK_NOTHROW(run_ensemble(c));
}

TEST_CASE("report") {
  const auto dir = scratch("report");
  CHECK_THROWS_AS(collect_report(dir / "absent"), ConfigError);
  CHECK_THROWS_AS(collect_report(dir), ConfigError);  // no runs
  run_ensemble(small_ensemble(dir / "z-lollipop", "lollipop"));
  run_ensemble(small_ensemble(dir / "a-bull", "bull"));
  run_ensemble(small_ensemble(dir / "m-star", "3-star"));
  const auto rows = collect_report(dir);
  REQUIRE(rows.size() == 3);
  // catalog order, not directory order
  CHECK(rows[0].summary.topology == TopologyClass::star3);
  CHECK(rows[1].summary.topology == TopologyClass::lollipop);
  CHECK(rows[2].summary.topology == TopologyClass::bull);
  CHECK(format_report(rows) == format_report(collect_report(dir)));
  CHECK(report_json(rows).size() == 3);

  SUBCASE("incomplete run") {
    fs::remove(dir / "a-bull" / "summary.json");
    CHECK_THROWS_AS(collect_report(dir), ConfigError);
  }
  SUBCASE("empty ensemble") {
    auto c = small_ensemble(dir / "empty", "wire");
    c.samples = 0;
    run_ensemble(c);
    CHECK_THROWS_AS(collect_report(dir), ConfigError);
  }
}

TEST_CASE("solve report") {
  const auto dir = scratch("solve");
  RunConfig c;
  c.command = "solve";
  c.graph_file = std::string(QGRAPH_FIXTURES) + "/star3_optimum.json";
  c.output_dir = dir.string();
  const auto r = run_solve(c);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(r.summary.at("tensors").at("beta_xxx_max").get<double>() == doctest::Approx(0.579).epsilon(0.003));
  CHECK_FALSE(solve_summary(r.summary).empty());
  c.graph_file = std::string(QGRAPH_FIXTURES) + "/malformed.json";
  CHECK_THROWS_AS(run_solve(c), ConfigError);
}

TEST_CASE("scan outputs") {
  const auto dir = scratch("scan");
  RunConfig c;
  c.command = "scan";
  c.scan_kind = "delta";
  c.g = {-3.8, 0.0};
  c.s0 = {0.27};
  c.output_dir = (dir / "delta").string();
  const auto r = run_scan(c);
  CHECK(fs::exists(r.dir / "delta.csv"));
  CHECK(r.summary.at("peak").at("g").get<double>() == -3.8);
  const auto lines = split(slurp(r.dir / "delta.csv"), '\n');
  CHECK(lines.size() == 3);
}
