#include "qgraph/tensors.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;

/// Restricted (excited-state) pieces of the moment table.
struct Excited {
  int n = 0;                    // excited states used
  Eigen::VectorXd inv_e;        // 1 / e_n
  std::array<Eigen::VectorXd, 2> v;   // xi_{0n}
  std::array<Eigen::MatrixXd, 2> bar; // barred xi_{nm}
};

Excited excited(const MomentTable& t, int k) {
  const int kk = t.whole_multiplets(k);
  if (kk < 2) throw std::invalid_argument("tensors need at least two states");
  Excited ex;
  ex.n = kk - 1;
  const Eigen::VectorXd e = t.reduced_energies();
  ex.inv_e = e.segment(1, ex.n).cwiseInverse();
  for (int i = 0; i < 2; ++i) {
    const Eigen::MatrixXd xi = t.xi(i);
    ex.v[static_cast<std::size_t>(i)] = xi.col(0).segment(1, ex.n);
    Eigen::MatrixXd b = xi.block(1, 1, ex.n, ex.n);
    b.diagonal().array() -= xi(0, 0);
    ex.bar[static_cast<std::size_t>(i)] = std::move(b);
  }
  return ex;
}

double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

template <class F>
Orientation scan_max(F f, int n = 6284) {  // 6284 steps is about 1e-3 rad
  const double h = 2.0 * kPi / n;
  int best = 0;
  double bv = f(0.0);
  for (int i = 1; i < n; ++i) {
    const double v = f(i * h);
    if (v > bv) {
      bv = v;
      best = i;
    }
  }
  auto neg = [&](double a) { return -f(a); };
  const auto r = boost::math::tools::brent_find_minima(neg, (best - 1) * h, (best + 1) * h, 40);
  Orientation o;
  if (-r.second >= bv) {
    o.angle = normalize_angle(r.first);
    o.value = -r.second;
  } else {
    o.angle = best * h;
    o.value = bv;
  }
  return o;
}

}  // namespace

BetaComponents beta_tensor(const MomentTable& t, int k) {
  const Excited ex = excited(t, k);
  std::array<Eigen::VectorXd, 2> w;
  for (std::size_t i = 0; i < 2; ++i) w[i] = ex.inv_e.cwiseProduct(ex.v[i]);
  auto term = [&](int i, int j, int l) {
    return w[static_cast<std::size_t>(i)].dot(ex.bar[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(l)]);
  };
  const double c = std::pow(0.75, 0.75);
  BetaComponents b;
  b.xxx = c * term(0, 0, 0);
  b.xxy = c * (term(0, 0, 1) + term(0, 1, 0) + term(1, 0, 0)) / 3.0;
  b.xyy = c * (term(0, 1, 1) + term(1, 0, 1) + term(1, 1, 0)) / 3.0;
  b.yyy = c * term(1, 1, 1);
  return b;
}

GammaComponents gamma_tensor(const MomentTable& t, int k) {
  const Excited ex = excited(t, k);
  std::array<Eigen::VectorXd, 2> w;
  for (std::size_t i = 0; i < 2; ++i) w[i] = ex.inv_e.cwiseProduct(ex.v[i]);
  // z[j][i] = bar_j * w_i
  std::array<std::array<Eigen::VectorXd, 2>, 2> z;
  for (std::size_t j = 0; j < 2; ++j) {
    for (std::size_t i = 0; i < 2; ++i) z[j][i] = ex.bar[j] * w[i];
  }
  const Eigen::VectorXd inv_e2 = ex.inv_e.cwiseProduct(ex.inv_e);
  double p2[2][2];
  double p1[2][2];
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      p2[i][j] = ex.v[i].dot(inv_e2.cwiseProduct(ex.v[j]));
      p1[i][j] = ex.v[i].dot(ex.inv_e.cwiseProduct(ex.v[j]));
    }
  }
  auto term = [&](int i, int j, int l, int m) {
    const auto& a = z[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    const auto& b = z[static_cast<std::size_t>(l)][static_cast<std::size_t>(m)];
    const double triple = a.dot(ex.inv_e.cwiseProduct(b));
    return triple - p2[i][j] * p1[l][m];
  };
  // average over every arrangement of a fixed number of y indices
  auto sym = [&](int ny) {
    double s = 0.0;
    int count = 0;
    for (int mask = 0; mask < 16; ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != ny) continue;
      s += term(mask & 1, (mask >> 1) & 1, (mask >> 2) & 1, (mask >> 3) & 1);
      ++count;
    }
    return 0.25 * s / count;
  };
  GammaComponents g;
  g.xxxx = sym(0);
  g.xxxy = sym(1);
  g.xxyy = sym(2);
  g.xyyy = sym(3);
  g.yyyy = sym(4);
  return g;
}

double rotate_beta(const BetaComponents& b, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return b.xxx * c * c * c + 3.0 * b.xxy * c * c * s + 3.0 * b.xyy * c * s * s + b.yyy * s * s * s;
}

double rotate_gamma(const GammaComponents& g, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return g.xxxx * c * c * c * c + 4.0 * g.xxxy * c * c * c * s + 6.0 * g.xxyy * c * c * s * s +
         4.0 * g.xyyy * c * s * s * s + g.yyyy * s * s * s * s;
}

BetaComponents rotate_components(const BetaComponents& b, double phi) {
  // new axes x' = (c, s), y' = (-s, c); contract the symmetric tensor
  const double t[2][2][2] = {{{b.xxx, b.xxy}, {b.xxy, b.xyy}}, {{b.xxy, b.xyy}, {b.xyy, b.yyy}}};
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double r[2][2] = {{c, s}, {-s, c}};
  auto comp = [&](int p, int q, int u) {
    double sum = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) sum += r[p][i] * r[q][j] * r[u][k] * t[i][j][k];
    return sum;
  };
  return {comp(0, 0, 0), comp(0, 0, 1), comp(0, 1, 1), comp(1, 1, 1)};
}

GammaComponents rotate_components(const GammaComponents& g, double theta) {
  const double by_y[5] = {g.xxxx, g.xxxy, g.xxyy, g.xyyy, g.yyyy};
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double r[2][2] = {{c, s}, {-s, c}};
  auto comp = [&](int p, int q, int u, int w) {
    double sum = 0.0;
    for (int mask = 0; mask < 16; ++mask) {
      const int i = mask & 1;
      const int j = (mask >> 1) & 1;
      const int k = (mask >> 2) & 1;
      const int l = (mask >> 3) & 1;
      sum += r[p][i] * r[q][j] * r[u][k] * r[w][l] * by_y[i + j + k + l];
    }
    return sum;
  };
  return {comp(0, 0, 0, 0), comp(0, 0, 0, 1), comp(0, 0, 1, 1), comp(0, 1, 1, 1), comp(1, 1, 1, 1)};
}

double tensor_norm(const BetaComponents& b) {
  return std::sqrt(b.xxx * b.xxx + 3.0 * b.xxy * b.xxy + 3.0 * b.xyy * b.xyy + b.yyy * b.yyy);
}

double tensor_norm(const GammaComponents& g) {
  return std::sqrt(g.xxxx * g.xxxx + 4.0 * g.xxxy * g.xxxy + 6.0 * g.xxyy * g.xxyy + 4.0 * g.xyyy * g.xyyy +
                   g.yyyy * g.yyyy);
}

Orientation optimal_orientation(const BetaComponents& b, int steps) {
  return scan_max([&](double a) { return rotate_beta(b, a); }, std::max(steps, 16));
}

Orientation gamma_max_orientation(const GammaComponents& g) {
  return scan_max([&](double a) { return rotate_gamma(g, a); });
}

Orientation gamma_min_orientation(const GammaComponents& g) {
  Orientation o = scan_max([&](double a) { return -rotate_gamma(g, a); });
  o.value = -o.value;
  return o;
}

double extreme_f(double e) { return std::pow(1.0 - e, 1.5) * (e * e + 1.5 * e + 1.0); }

double extreme_g(double x) {
  const double r = 1.0 - x * x * x * x;
  return std::pow(3.0, 0.25) * x * std::sqrt(1.5 * std::max(r, 0.0));
}

ThreeLevelDiagnostics three_level(const MomentTable& t, double phi) {
  if (t.size() < 3) throw std::invalid_argument("three_level needs at least three states");
  ThreeLevelDiagnostics d;
  const auto& e = t.energies();
  d.e_ratio = (e(1) - e(0)) / (e(2) - e(0));
  const Eigen::MatrixXd xi = std::cos(phi) * t.xi(0) + std::sin(phi) * t.xi(1);
  d.x_ratio = xi(0, 1);
  const Eigen::VectorXd en = t.reduced_energies();
  double sum = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (int m = 1; m <= 2; ++m) {
      const double bar = xi(n, m) - (n == m ? xi(0, 0) : 0.0);
      sum += xi(0, n) * bar * xi(m, 0) / (en(n) * en(m));
    }
  }
  d.beta_3l = std::pow(0.75, 0.75) * sum;
  d.extreme = extreme_f(d.e_ratio) * extreme_g(std::min(std::abs(d.x_ratio), 1.0));
  return d;
}

TensorSet compute_tensors(const MomentTable& t, int k) {
  TensorSet ts;
  ts.states = t.whole_multiplets(k);
  ts.beta = beta_tensor(t, ts.states);
  ts.gamma = gamma_tensor(t, ts.states);
  ts.beta_norm = tensor_norm(ts.beta);
  ts.gamma_norm = tensor_norm(ts.gamma);
  ts.beta_best = optimal_orientation(ts.beta);
  ts.gamma_best = gamma_max_orientation(ts.gamma);
  ts.gamma_worst = gamma_min_orientation(ts.gamma);
  if (ts.states - 5 >= 2) {
    const auto lower = beta_tensor(t, ts.states - 5);
    ts.convergence_delta = std::abs(ts.beta.xxx - lower.xxx);
    ts.converged = ts.convergence_delta <= 1e-3;
  }
  return ts;
}

nlohmann::json TensorSet::to_json() const {
  nlohmann::json j;
  j["beta"] = {{"xxx", beta.xxx}, {"xxy", beta.xxy}, {"xyy", beta.xyy}, {"yyy", beta.yyy}};
  j["gamma"] = {{"xxxx", gamma.xxxx}, {"xxxy", gamma.xxxy}, {"xxyy", gamma.xxyy}, {"xyyy", gamma.xyyy},
                {"yyyy", gamma.yyyy}};
  j["beta_norm"] = beta_norm;
  j["gamma_norm"] = gamma_norm;
  j["phi_star"] = beta_best.angle;
  j["beta_xxx_max"] = beta_best.value;
  j["theta_max"] = gamma_best.angle;
  j["gamma_xxxx_max"] = gamma_best.value;
  j["theta_min"] = gamma_worst.angle;
  j["gamma_xxxx_min"] = gamma_worst.value;
  j["states"] = states;
  j["converged"] = converged;
  j["convergence_delta"] = convergence_delta;
  return j;
}

std::vector<std::string> TensorSet::csv_columns() {
  return {"beta_xxx",     "beta_xxy",       "beta_xyy",      "beta_yyy",       "gamma_xxxx",
          "gamma_xxxy",   "gamma_xxyy",     "gamma_xyyy",    "gamma_yyyy",     "beta_norm",
          "gamma_norm",   "phi_star",       "beta_xxx_max",  "theta_max",      "gamma_xxxx_max",
          "theta_min",    "gamma_xxxx_min", "states",        "converged"};
}

std::vector<double> TensorSet::csv_values() const {
  return {beta.xxx,        beta.xxy,         beta.xyy,          beta.yyy,          gamma.xxxx,
          gamma.xxxy,      gamma.xxyy,       gamma.xyyy,        gamma.yyyy,        beta_norm,
          gamma_norm,      beta_best.angle,  beta_best.value,   gamma_best.angle,  gamma_best.value,
          gamma_worst.angle, gamma_worst.value, static_cast<double>(states), converged ? 1.0 : 0.0};
}

}  // namespace qgraph
