#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

// --- motif secular functions ---------------------------------------------------

/// 1/4 [cos kL1 + cos kL2 + cos kL3 - 3 cos kL] with the combination lengths
/// L1 = |a+b-c|, L2 = |a-b+c|, L3 = |a-b-c|, L = a+b+c.
[[nodiscard]] double secular_3star(double a, double b, double c, double k);
/// prod_i sin(k a_i) * sum_i cot(k a_i), evaluated without divisions.
[[nodiscard]] double secular_nstar(const std::vector<double>& lengths, double k);
/// Explicit 4-prong form 1/2 [sin k(a+b) cos k(c-d) + cos k(a-b) sin k(c+d) - sin k(a+b+c+d)].
[[nodiscard]] double secular_4star(double a, double b, double c, double d, double k);
/// 1/2 [3 cos k(a + L/2) - cos k(a - L/2)] for prong a and loop length L.
[[nodiscard]] double secular_lollipop(double a, double loop, double k);
/// Two 3-stars (a,b | c,d) sharing edge e.
[[nodiscard]] double secular_star_star(double a, double b, double c, double d, double e, double k);
/// The expanded sine form of the same function.
[[nodiscard]] double secular_star_star_expanded(double a, double b, double c, double d, double e, double k);
/// Star with prongs b, c whose third prong a ends on a lollipop center.
[[nodiscard]] double secular_pop_star(double a, double b, double c, double loop, double k);
/// Two 4-vertices with prongs (a,b) and (c,d) joined by two paths of length L1, L2.
[[nodiscard]] double secular_bubble(double a, double b, double c, double d, double l1, double l2, double k);
/// Box of length L with a point potential (g/L) delta(s - s0):
/// sin kL + (2g/(kL)) sin ks0 sin k(L-s0). Throws unless 0 < s0 < L.
[[nodiscard]] double secular_delta_wire(double length, double s0, double g, double k);

// --- composite systems ----------------------------------------------------------

/// Motif coupling system. Row v holds the flux balance at motif center v,
/// multiplied through by the sines of its non-loop channels and the half-loop
/// cosines of its loops:
///   Z_v F_v(k) - sum_w Z_w prod_{channels of v except (v,w)} sin * prod_loops cos = 0.
class SecularSystem {
 public:
  struct Link {
    Channel::Kind kind;
    double length;
    int other;  ///< row of the far center for couplings, -1 otherwise
  };
  struct Row {
    int center = 0;
    double potential = 0.0;
    std::vector<Link> links;
  };

  [[nodiscard]] int size() const { return static_cast<int>(rows_.size()); }
  [[nodiscard]] const std::vector<Row>& rows() const { return rows_; }
  [[nodiscard]] double total_length() const { return total_length_; }
  [[nodiscard]] int channel_count() const { return channel_count_; }

  [[nodiscard]] Eigen::MatrixXd matrix(double k) const;
  [[nodiscard]] double determinant(double k) const;
  /// Determinant divided by the sines of the coupling channels; removes the
  /// spurious zeros at sin(k l) = 0 that the row scaling introduces.
  [[nodiscard]] double reduced(double k) const;
  /// Center amplitudes Z_v from the null space of M(k), one column per state.
  [[nodiscard]] Eigen::MatrixXd null_space(double k, int dimension = 1) const;

  [[nodiscard]] const std::vector<SpecialMode>& special_modes() const { return special_; }
  [[nodiscard]] bool is_three_star() const { return three_star_; }
  /// Pure cycle: no determinant, every mode is special.
  [[nodiscard]] bool is_trivial() const { return trivial_; }
  [[nodiscard]] std::vector<double> three_star_lengths() const;

  /// Exact eigenvalue count below k, when the system was built from a graph.
  [[nodiscard]] bool has_counter() const { return static_cast<bool>(counter_); }
  [[nodiscard]] int count_below(double k) const { return counter_(k); }

  static SecularSystem three_star(double a, double b, double c);
  static SecularSystem from_graph(const GraphSpec& g);

  friend SecularSystem assemble_composite(const Decomposition& d);

 private:
  std::vector<Row> rows_;
  double bare_length_ = 0.0;  ///< open path with no centers: sin(k L)
  bool trivial_ = false;      ///< pure cycle: every mode is special
  bool three_star_ = false;
  double total_length_ = 0.0;
  int channel_count_ = 0;
  std::vector<SpecialMode> special_;
  std::function<int(double)> counter_;
};

/// Throws std::invalid_argument if a channel is claimed by more than two
/// motifs, a coupling channel is not claimed by both of its end centers, or a
/// motif lists a channel that does not touch its center.
SecularSystem assemble_composite(const Decomposition& d);

struct RootSet {
  std::vector<Level> levels;  ///< ascending, special modes merged in
  bool complete = true;       ///< the count check passed
  double step = 0.0;          ///< final scan step
};

/// All positive roots in (0, k_max]. Pure 3-stars use one bracket per cell
/// between multiples of pi/L; other systems scan the reduced determinant with
/// step pi/(20 L), halving the step while the root count disagrees with the
/// exact count (or, for hand-built systems, with the Weyl estimate).
/// Roots are refined to about 1e-14 relative.
RootSet find_roots(const SecularSystem& system, double k_max);

}  // namespace qgraph
