#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/ensemble.hpp"

namespace qgraph {

inline constexpr const char* kVersion = "0.1.0";

/// Bad configuration or input file (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Too many solver failures for the configured budget (CLI exit code 3).
class SolverBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;      ///< solve | ensemble | scan | report
  std::string graph_file;   ///< solve
  std::string topology;     ///< ensemble
  int samples = 10000;
  std::uint64_t seed = 1;
  int states = 30;
  int threads = 1;
  /// fraction of failed samples tolerated before the run is an error
  double max_failure_rate = 0.01;
  std::string output_dir;   ///< run directory; empty picks a default
  std::vector<std::string> formats{"csv", "json"};

  // scans
  std::string scan_kind;        ///< prong | angle | delta
  std::vector<double> middle;   ///< prong: middle prong lengths
  std::vector<double> shortest; ///< prong: short prong lengths
  int angle_steps = 24;
  std::vector<double> lengths{1.0, 0.6, 0.13};  ///< angle: star prong lengths
  std::vector<double> swept;                    ///< angle: swept directions
  double wire_length = 1.0;     ///< delta
  std::vector<double> g;        ///< delta: couplings
  std::vector<double> s0;       ///< delta: positions

  [[nodiscard]] nlohmann::json to_json() const;
  /// Accepts a plain config object or a manifest (uses its "config" member).
  /// Unknown keys and wrong types raise ConfigError naming the key.
  static RunConfig from_json(const nlohmann::json& j);
  /// Reads a JSON config or manifest file.
  static RunConfig load(const std::string& path);
  /// Throws ConfigError when the config cannot run.
  void validate() const;
  /// Run directory: output_dir, or <QGRAPH_OUTPUT_DIR or ./qgraph-runs>/<label>.
  [[nodiscard]] std::filesystem::path run_dir() const;
};

/// Round-trip formatting (%.17g).
std::string format_double(double v);
/// Human formatting with three significant figures.
std::string format_sig3(double v);

/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Frozen record columns for a class with `vertices` vertices and `edges` edges.
std::vector<std::string> record_columns(std::size_t vertices, std::size_t edges);
std::string records_csv(const std::vector<EnsembleRecord>& records);
std::string traces_csv(const std::vector<SpectrumTrace>& traces);
std::string prong_csv(const std::vector<ProngCell>& cells);
std::string angle_csv(const std::vector<AnglePoint>& points);
std::string delta_csv(const std::vector<DeltaPoint>& points);

nlohmann::json manifest_json(const RunConfig& config);

/// Single-graph report: spectrum, moment excerpt, tensors and diagnostics.
nlohmann::json solve_report(const GraphSpec& g, int states);
std::string solve_summary(const nlohmann::json& report);

struct RunResult {
  std::filesystem::path dir;
  nlohmann::json summary;
};

/// Solves the configured graph and writes report.json into the run directory.
RunResult run_solve(const RunConfig& config);
/// Samples, writes records.csv, traces.csv, summary.json and the manifest.
/// Throws SolverBudgetError when the failure rate exceeds the budget (after
/// writing the outputs).
RunResult run_ensemble(const RunConfig& config, const std::function<void(int)>& progress = {});
/// Writes the grid or trace table and a summary.
RunResult run_scan(const RunConfig& config);

struct ReportRow {
  std::string run;
  EnsembleSummary summary;
};
/// Collects every ensemble summary under `dir` (the directory itself or its
/// immediate subdirectories), in catalog order. Throws ConfigError for a
/// missing directory, runs without a summary, or empty ensembles.
std::vector<ReportRow> collect_report(const std::filesystem::path& dir);
std::string format_report(const std::vector<ReportRow>& rows);
nlohmann::json report_json(const std::vector<ReportRow>& rows);

}  // namespace qgraph
