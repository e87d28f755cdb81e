#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qgraph/tensors.hpp"

namespace qgraph {

/// Per-sample generator: mt19937_64 seeded from splitmix64(seed, id).
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t id);
/// Uniform on [0, 1) from the top 53 bits; identical on every platform.
double uniform01(std::mt19937_64& rng);

struct EnsembleOptions {
  int samples = 10000;
  std::uint64_t seed = 1;
  int states = 30;
  int threads = 1;
  /// delta-wire sampling range for the coupling g (potential g / L)
  double g_min = -10.0;
  double g_max = 10.0;
};

/// Draws one random geometry of a catalog class. Edge lengths are uniform on
/// (0.05, 1] with the longest normalized to 1 and directions uniform on
/// [0, 2 pi). Cycle-bearing classes close each cycle geometrically and are
/// redrawn while any edge is shorter than 0.05.
GraphSpec sample_graph(TopologyClass c, std::mt19937_64& rng, const EnsembleOptions& options = {});

struct EnsembleRecord {
  std::int64_t id = 0;
  bool ok = false;
  std::string error;
  std::vector<Vec2> positions;
  std::vector<double> potentials;
  std::vector<double> edge_lengths;
  std::vector<double> edge_angles;
  TensorSet tensors;
  ThreeLevelDiagnostics three;
  double sum_rule = 0.0;           ///< combined S_00 over the retained states
  std::vector<double> wavenumbers; ///< lowest ten
};

/// Solves one graph into a record (never throws; failures are recorded).
EnsembleRecord solve_record(const GraphSpec& g, int states, std::int64_t id = 0);

/// Records in sample-id order; deterministic for a given seed regardless of
/// the thread count. `progress` (optional) is called from worker threads.
std::vector<EnsembleRecord> sample_topology(TopologyClass c, const EnsembleOptions& options,
                                            const std::function<void(int)>& progress = {});

struct EnsembleSummary {
  TopologyClass topology = TopologyClass::custom;
  int samples = 0;
  int failed = 0;
  int unconverged = 0;
  double max_beta_xxx = 0.0;  ///< max over records of beta_xxx(phi*)
  double max_beta_norm = 0.0;
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  std::int64_t argmax_id = -1;
  std::vector<Vec2> argmax_positions;
  ThreeLevelDiagnostics argmax_three;
  double argmax_beta_norm = 0.0;

  [[nodiscard]] double failure_rate() const { return samples > 0 ? static_cast<double>(failed) / samples : 0.0; }
  [[nodiscard]] nlohmann::json to_json() const;
  static EnsembleSummary from_json(const nlohmann::json& j);
};

EnsembleSummary summarize(TopologyClass c, const std::vector<EnsembleRecord>& records);

/// Fixed metric graph with its states solved once; moments for any drawing
/// of the same edge lengths follow from per-edge integral matrices.
class FixedMetric {
 public:
  FixedMetric(const GraphSpec& g, int states);
  /// `drawing` must have the adjacency and edge lengths of the solved graph.
  [[nodiscard]] MomentTable table(const GraphSpec& drawing) const;
  [[nodiscard]] const SpectralSolution& states() const { return states_; }

 private:
  std::vector<Eigen::MatrixXd> overlap_;
  std::vector<Eigen::MatrixXd> first_;
  Eigen::VectorXd energies_;
  std::vector<int> multiplet_;
  SpectralSolution states_;
};

/// 3-star whose prongs (lengths, directions) leave one center.
GraphSpec star_graph(const std::vector<double>& lengths, const std::vector<double>& angles);

struct ProngCell {
  double middle = 0.0;
  double shortest = 0.0;
  double beta = 0.0;             ///< max beta_xxx(phi*) over prong directions
  std::vector<double> angles;    ///< best directions (long prong fixed at 0)
};
/// Longest prong fixed at 1; each cell maximizes over the two free directions
/// (coarse grid of `angle_steps` per direction, then a simplex refinement).
std::vector<ProngCell> prong_scan_3star(const std::vector<double>& middle, const std::vector<double>& shortest,
                                        int states = 30, int angle_steps = 24);

struct AnglePoint {
  double angle = 0.0;  ///< direction of the middle prong relative to the long one
  double beta = 0.0;   ///< best over the remaining directions
};
/// Star with `lengths` (long prong first, swept prong second); the remaining
/// prong directions are optimized on a grid of `samples` points (3-star) or
/// drawn at random from `seed` (more prongs).
std::vector<AnglePoint> angle_scan(const std::vector<double>& lengths, const std::vector<double>& swept,
                                   int states = 30, int samples = 72, std::uint64_t seed = 1);

struct SpectrumTrace {
  std::int64_t id = 0;
  double beta = 0.0;
  std::vector<double> wavenumbers;
};
/// Records sorted ascending by beta_xxx(phi*).
std::vector<SpectrumTrace> spectrum_vs_beta(const std::vector<EnsembleRecord>& records);

struct DeltaPoint {
  double g = 0.0;
  double s0 = 0.0;
  bool ok = false;
  double beta = 0.0;     ///< full beta_xxx along the wire
  double beta_3l = 0.0;  ///< three-state truncation
  double extreme = 0.0;  ///< f(E) G(X)
  double e_ratio = 0.0;
  double x_ratio = 0.0;
  std::vector<double> sum_rule;  ///< combined S_00 with K = 3..7 states
};
/// Wire of length L with a point potential (g/L) delta(s - s0) for every
/// (g, s0) of the grid. Negative g (attractive) is allowed.
std::vector<DeltaPoint> delta_wire_scan(double length, const std::vector<double>& g, const std::vector<double>& s0,
                                        int states = 30);
DeltaPoint delta_wire_point(double length, double g, double s0, int states = 30);

}  // namespace qgraph
