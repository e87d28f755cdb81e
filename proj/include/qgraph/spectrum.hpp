#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"

namespace qgraph {

enum class ModeFamily { determinant, loop_only, zero };

[[nodiscard]] const char* to_string(ModeFamily f);

/// Edge function  phi(s) = c * C(s) + s * S(s)  where (C, S) is
/// (cos ks, sin ks) for positive energy, (cosh ks, sinh ks) for bound states
/// (k then holds the decay constant), and (1, 0) for the zero mode.
struct EdgeFunction {
  double c = 0.0;
  double s = 0.0;
};

struct Eigenstate {
  double k = 0.0;
  bool bound = false;  ///< negative energy; k is the decay constant
  double energy = 0.0;
  ModeFamily family = ModeFamily::determinant;
  int multiplet = 0;      ///< index of the degenerate multiplet
  int multiplicity = 1;   ///< size of that multiplet
  std::vector<double> vertex_amplitudes;  ///< psi at every vertex, zero at terminals
  std::vector<EdgeFunction> edges;        ///< one per graph edge

  [[nodiscard]] double value(const Edge& e, double s) const;
  [[nodiscard]] double derivative(const Edge& e, double s) const;
  /// Amplitudes at the two ends of an edge, the A/B pair of the canonical
  /// sine form  (A sin k(a-s) + B sin ks) / sin ka.
  [[nodiscard]] std::pair<double, double> end_amplitudes(const Edge& e) const;
};

struct Level {
  double k = 0.0;
  bool bound = false;
  int multiplicity = 1;
  ModeFamily family = ModeFamily::determinant;
  [[nodiscard]] double energy() const { return bound ? -0.5 * k * k : 0.5 * k * k; }
};

struct SpectralSolution {
  std::vector<Eigenstate> states;  ///< ascending energy
  [[nodiscard]] std::vector<double> wavenumbers() const;
  [[nodiscard]] std::vector<double> energies() const;
};

struct SpectralOptions {
  int states = 30;          ///< number of states to keep (ground state included)
  double rel_tol = 1e-12;   ///< relative wavenumber tolerance
  double sine_guard = 1e-8; ///< below this |sin ka| the vertex route is abandoned
};

/// The vertex operator restricted to internal vertices: the sum of outward
/// edge derivatives produced by unit vertex amplitudes, minus twice the vertex
/// potential. Its inertia counts eigenvalues exactly:
///   #{E_n < E} = sum_e #{Dirichlet levels of edge e below E} + n_+(Lambda(E)).
class VertexOperator {
 public:
  explicit VertexOperator(const GraphSpec& g);

  [[nodiscard]] int size() const { return static_cast<int>(rows_); }
  /// Eigenvalue count strictly below energy E.
  [[nodiscard]] int count_below(double energy);
  [[nodiscard]] int count_below_k(double k) { return count_below(0.5 * k * k); }
  /// Dirichlet edge levels below E (the pole count).
  [[nodiscard]] int dirichlet_count(double energy) const;
  [[nodiscard]] double determinant(double energy);
  [[nodiscard]] const Eigen::MatrixXd& matrix(double energy);
  /// min over edges of |sin(k a_e)| at positive energy, 1 otherwise.
  [[nodiscard]] double min_abs_sine(double energy) const;
  [[nodiscard]] const std::vector<int>& row_of_vertex() const { return row_; }

 private:
  struct EdgeData {
    double length;
    int a;  ///< row of the s = 0 end, -1 for terminals
    int b;
  };
  void fill(double energy);

  std::vector<EdgeData> edges_;
  std::vector<int> row_;
  std::vector<double> potential_;
  std::size_t rows_ = 0;
  Eigen::MatrixXd m_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

/// The lowest `count` levels with multiplicities, degenerate multiplets kept
/// whole (the result may therefore hold slightly more than `count` states).
std::vector<Level> find_levels(const GraphSpec& g, int count, double rel_tol = 1e-12);

/// Amplitudes (unnormalized) for one level. Uses the null space of the vertex
/// operator, and the full 2E boundary-condition matrix when an edge sine is
/// below the guard or the multiplet has no support on the vertices.
std::vector<Eigenstate> solve_amplitudes(const GraphSpec& g, const Level& level, double sine_guard = 1e-8);

/// Unnormalized states for the lowest `options.states` levels.
SpectralSolution solve_spectrum(const GraphSpec& g, const SpectralOptions& options = {});

/// Degenerate 3-star pair at a wavenumber where every prong sine vanishes,
/// from the limit formulas (A1 = A2 = C1 = 1). Amplitudes multiply
/// sin k(a_i - s) with s measured from the center.
struct AmplitudeTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};
struct DegenerateSolution {
  enum class Kind { pair, one_sine, two_sines };
  Kind kind = Kind::pair;
  std::vector<AmplitudeTriple> states;
};
/// Throws std::invalid_argument unless at least one prong sine vanishes at k.
DegenerateSolution solve_degenerate(double a, double b, double c, double k, double tol = 1e-8);

struct SpecialMode {
  double k = 0.0;
  int multiplicity = 1;
  ModeFamily family = ModeFamily::zero;
  double cycle_length = 0.0;  ///< loop length for loop-only families
};

/// Modes the motif determinant misses: the constant zero mode of closed
/// graphs and the loop-only families (k = 2 pi n / L) of cycles hanging off a
/// single vertex. Pure cycles contribute their doubly degenerate ladder.
std::vector<SpecialMode> enumerate_special_modes(const GraphSpec& g, double k_max);

/// Edges that lie on no cycle.
std::vector<bool> bridge_edges(const GraphSpec& g);

/// Flux imbalance at internal vertex v: sum of outward derivatives minus
/// 2 * potential * psi(v), scaled by 1/k.
double flux_residual(const GraphSpec& g, const Eigenstate& st, int v);

}  // namespace qgraph
