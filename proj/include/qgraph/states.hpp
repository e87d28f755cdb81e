#pragma once

#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

/// Normalizes every state to unit edge-sum norm, orthonormalizes inside each
/// degenerate multiplet and fixes the sign so that the first vertex carrying
/// a nonzero amplitude is positive. Throws std::runtime_error on a state with
/// zero norm.
SpectralSolution normalize(const GraphSpec& g, SpectralSolution solution);

/// Eigenstates ready for moments: solve_spectrum followed by normalize.
SpectralSolution solve_states(const GraphSpec& g, const SpectralOptions& options = {});

/// Closed-form integrals  int_0^a f(s) g(s) ds  and  int_0^a f(s) g(s) s ds
/// for two edge functions of the same edge.
struct EdgeIntegrals {
  double overlap = 0.0;
  double first = 0.0;
};
EdgeIntegrals edge_integrals(const Eigenstate& p, const Eigenstate& q, const Edge& e);

/// Full edge-sum overlap <p|q>.
double overlap(const GraphSpec& g, const Eigenstate& p, const Eigenstate& q);

class MomentTable {
 public:
  MomentTable() = default;
  MomentTable(Eigen::MatrixXd x, Eigen::MatrixXd y, Eigen::VectorXd energies, std::vector<int> multiplet);

  [[nodiscard]] int size() const { return static_cast<int>(energies_.size()); }
  [[nodiscard]] const Eigen::MatrixXd& x() const { return x_; }
  [[nodiscard]] const Eigen::MatrixXd& y() const { return y_; }
  /// Component 0 is x, 1 is y.
  [[nodiscard]] const Eigen::MatrixXd& r(int i) const { return i == 0 ? x_ : y_; }
  [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
  [[nodiscard]] const std::vector<int>& multiplet() const { return multiplet_; }

  [[nodiscard]] double e10() const { return energies_(1) - energies_(0); }
  /// (1 / (2 E10))^{1/2}, the largest allowed |x_01|.
  [[nodiscard]] double r01_max() const;
  /// xi = r / r01_max.
  [[nodiscard]] Eigen::MatrixXd xi(int i) const;
  /// e_n = E_n0 / E10.
  [[nodiscard]] Eigen::VectorXd reduced_energies() const;
  /// Smallest count >= k that does not split a degenerate multiplet.
  [[nodiscard]] int whole_multiplets(int k) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static MomentTable from_json(const nlohmann::json& j);

 private:
  Eigen::MatrixXd x_;
  Eigen::MatrixXd y_;
  Eigen::VectorXd energies_;
  std::vector<int> multiplet_;
};

/// x_nm = sum over edges of int phi_n phi_m x(s) ds with x(s) measured from
/// the graph origin; likewise y. States must be normalized.
MomentTable transition_moments(const GraphSpec& g, const SpectralSolution& states);

enum class Channel2D { x, y, combined };

/// Truncated  S_nm(K) = sum_{p<K} [2E_p0 - (E_n0 + E_m0)] r_np r_pm ; the
/// untruncated value is delta_nm.
double truncated_sum_rule(const MomentTable& t, int n, int m, int k, Channel2D channel);

struct SumRuleReport {
  struct Entry {
    int n = 0;
    int m = 0;
    int k = 0;
    double x = 0.0;
    double y = 0.0;
    double combined = 0.0;
  };
  std::vector<Entry> entries;
  /// Largest |S_nm - delta_nm| of the combined channel at the largest K.
  [[nodiscard]] double worst_residual() const;
};

/// Truncated sums for every (n, m) pair and every K in `ks` (K larger than the
/// table is clipped).
SumRuleReport sum_rule_diagnostics(const MomentTable& t, const std::vector<std::pair<int, int>>& pairs,
                                   const std::vector<int>& ks);

}  // namespace qgraph
