// qgraph command line front end: solve, ensemble, scan, report.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgraph/io.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kSolverExit = 3;

struct Flags {
  std::string config;
  std::string graph;
  std::string topology;
  int samples = 0;
  std::uint64_t seed = 0;
  int states = 0;
  int threads = 0;
  double max_failure_rate = 0.0;
  std::string out;
  std::vector<std::string> formats;
  std::string kind;
  std::vector<double> middle, shortest, lengths, swept, g, s0;
  double wire_length = 0.0;
  int angle_steps = 0;
  bool json = false;
  bool quiet = false;
};

/// Config file first, then every flag that was actually given.
qgraph::RunConfig resolve(const std::string& command, const Flags& f, const CLI::App& sub) {
  qgraph::RunConfig c = f.config.empty() ? qgraph::RunConfig{} : qgraph::RunConfig::load(f.config);
  c.command = command;
  auto given = [&](const char* name) {
    const auto* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--graph")) c.graph_file = f.graph;
  if (given("--class")) c.topology = f.topology;
  if (given("--samples")) c.samples = f.samples;
  if (given("--seed")) c.seed = f.seed;
  if (given("--states")) c.states = f.states;
  if (given("--threads")) c.threads = f.threads;
  if (given("--max-failure-rate")) c.max_failure_rate = f.max_failure_rate;
  if (given("--out")) c.output_dir = f.out;
  if (given("--formats")) c.formats = f.formats;
  if (given("--kind")) c.scan_kind = f.kind;
  if (given("--middle")) c.middle = f.middle;
  if (given("--short")) c.shortest = f.shortest;
  if (given("--lengths")) c.lengths = f.lengths;
  if (given("--swept")) c.swept = f.swept;
  if (given("--g")) c.g = f.g;
  if (given("--s0")) c.s0 = f.s0;
  if (given("--wire-length")) c.wire_length = f.wire_length;
  if (given("--angle-steps")) c.angle_steps = f.angle_steps;
  return c;
}

void common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config or manifest to start from");
  sub->add_option("--states", f.states, "retained states K");
  sub->add_option("--out", f.out, "run directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, transition moments and hyperpolarizabilities of planar quantum graphs"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "solve one graph file");
  common(solve, f);
  solve->add_option("--graph", f.graph, "graph JSON file");
  solve->add_flag("--json", f.json, "print the JSON report instead of the summary");

  auto* ensemble = app.add_subcommand("ensemble", "Monte Carlo ensemble of one topology class");
  common(ensemble, f);
  ensemble->add_option("--class", f.topology, "topology class name");
  ensemble->add_option("--samples", f.samples, "number of samples");
  ensemble->add_option("--seed", f.seed, "RNG seed");
  ensemble->add_option("--threads", f.threads, "worker threads");
  ensemble->add_option("--max-failure-rate", f.max_failure_rate, "tolerated failed fraction");
  ensemble->add_option("--formats", f.formats, "record formats (csv, json)");
  ensemble->add_flag("--quiet", f.quiet, "no progress output");

  auto* scan = app.add_subcommand("scan", "parameter scans");
  common(scan, f);
  scan->add_option("--kind", f.kind, "prong | angle | delta");
  scan->add_option("--middle", f.middle, "prong scan: middle prong lengths");
  scan->add_option("--short", f.shortest, "prong scan: short prong lengths");
  scan->add_option("--angle-steps", f.angle_steps, "prong scan: coarse steps per direction");
  scan->add_option("--lengths", f.lengths, "angle scan: star prong lengths, long and swept first");
  scan->add_option("--swept", f.swept, "angle scan: directions of the swept prong");
  scan->add_option("--seed", f.seed, "angle scan: RNG seed for stars with more prongs");
  scan->add_option("--g", f.g, "delta scan: couplings");
  scan->add_option("--s0", f.s0, "delta scan: potential positions");
  scan->add_option("--wire-length", f.wire_length, "delta scan: wire length");

  auto* report = app.add_subcommand("report", "results table across ensemble runs");
  std::string run_dir;
  report->add_option("RUN_DIR", run_dir, "directory holding ensemble runs")->required();
  report->add_flag("--json", f.json, "print JSON instead of the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*solve) {
      const auto c = resolve("solve", f, *solve);
      const auto r = qgraph::run_solve(c);
      if (f.json) {
        std::cout << r.summary.dump(2) << "\n";
      } else {
        std::cout << qgraph::solve_summary(r.summary);
        std::cout << "report           " << (r.dir / "report.json").string() << "\n";
      }
    } else if (*ensemble) {
      const auto c = resolve("ensemble", f, *ensemble);
      std::function<void(int)> progress;
      if (!f.quiet && c.samples >= 1000) {
        progress = [n = c.samples](int id) {
          if ((id + 1) % 1000 == 0) std::fprintf(stderr, "  %d / %d\n", id + 1, n);
        };
      }
      try {
        const auto r = qgraph::run_ensemble(c, progress);
        std::cout << qgraph::format_report({{r.dir.filename().string(), qgraph::EnsembleSummary::from_json(r.summary)}});
        std::cout << "run directory " << r.dir.string() << "\n";
      } catch (const qgraph::SolverBudgetError& e) {
        std::cerr << "qgraph: " << e.what() << "\n";
        return kSolverExit;
      }
    } else if (*scan) {
      const auto c = resolve("scan", f, *scan);
      const auto r = qgraph::run_scan(c);
      std::cout << r.summary.dump(2) << "\n";
      std::cout << "run directory " << r.dir.string() << "\n";
    } else if (*report) {
      const auto rows = qgraph::collect_report(run_dir);
      const std::string table = qgraph::format_report(rows);
      const std::string json = qgraph::report_json(rows).dump(2) + "\n";
      qgraph::write_atomic(std::filesystem::path(run_dir) / "report.txt", table);
      qgraph::write_atomic(std::filesystem::path(run_dir) / "report.json", json);
      std::cout << (f.json ? json : table);
    }
  } catch (const qgraph::ConfigError& e) {
    std::cerr << "qgraph: " << e.what() << "\n";
    return kConfigExit;
  } catch (const qgraph::SolverBudgetError& e) {
    std::cerr << "qgraph: " << e.what() << "\n";
    return kSolverExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qgraph: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "qgraph: " << e.what() << "\n";
    return kSolverExit;
  }
  return 0;
}
