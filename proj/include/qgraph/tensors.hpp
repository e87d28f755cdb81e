#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/states.hpp"

namespace qgraph {

struct BetaComponents {
  double xxx = 0.0;
  double xxy = 0.0;
  double xyy = 0.0;
  double yyy = 0.0;
};

struct GammaComponents {
  double xxxx = 0.0;
  double xxxy = 0.0;
  double xxyy = 0.0;
  double xyyy = 0.0;
  double yyyy = 0.0;
};

/// Intrinsic first hyperpolarizability from the lowest K states (K is rounded
/// up so that no degenerate multiplet is split). The sum-over-states tensor is
/// symmetrized over its three indices.
BetaComponents beta_tensor(const MomentTable& t, int k);
/// Intrinsic second hyperpolarizability, triple sum minus the double sum,
/// symmetrized over its four indices.
GammaComponents gamma_tensor(const MomentTable& t, int k);

/// beta_xxx seen along the axis at angle phi.
double rotate_beta(const BetaComponents& b, double phi);
double rotate_gamma(const GammaComponents& g, double theta);
/// All components in a frame rotated by phi.
BetaComponents rotate_components(const BetaComponents& b, double phi);
GammaComponents rotate_components(const GammaComponents& g, double theta);

double tensor_norm(const BetaComponents& b);
double tensor_norm(const GammaComponents& g);

struct Orientation {
  double angle = 0.0;  ///< in [0, 2 pi)
  double value = 0.0;
};
/// Global maximum of rotate_beta over the circle: scan of `steps` points
/// (default about 1e-3 rad), then a bracketed refinement. beta_xxx(phi) is a
/// cubic trigonometric polynomial, so a few hundred steps already isolate the
/// global peak.
Orientation optimal_orientation(const BetaComponents& b, int steps = 6284);
Orientation gamma_max_orientation(const GammaComponents& g);
Orientation gamma_min_orientation(const GammaComponents& g);

/// (1-E)^{3/2} (E^2 + 3E/2 + 1)
double extreme_f(double e);
/// 3^{1/4} X sqrt(3/2 (1 - X^4))
double extreme_g(double x);

struct ThreeLevelDiagnostics {
  double e_ratio = 0.0;   ///< E10 / E20
  double x_ratio = 0.0;   ///< x01 / x01_max along the chosen axis
  double beta_3l = 0.0;   ///< three-state truncation of beta along the axis
  double extreme = 0.0;   ///< f(E) G(|X|)
};
/// Diagnostics along the axis at angle phi (use the beta-optimal angle).
ThreeLevelDiagnostics three_level(const MomentTable& t, double phi);

struct TensorSet {
  BetaComponents beta;
  GammaComponents gamma;
  double beta_norm = 0.0;
  double gamma_norm = 0.0;
  Orientation beta_best;   ///< phi*, beta_xxx(phi*)
  Orientation gamma_best;  ///< theta*, max gamma_xxxx(theta)
  Orientation gamma_worst; ///< min gamma_xxxx(theta)
  int states = 0;          ///< K actually used
  bool converged = true;   ///< |beta_xxx(K) - beta_xxx(K-5)| <= 1e-3
  double convergence_delta = 0.0;

  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] static std::vector<std::string> csv_columns();
  [[nodiscard]] std::vector<double> csv_values() const;
};

TensorSet compute_tensors(const MomentTable& t, int k = 30);

}  // namespace qgraph
