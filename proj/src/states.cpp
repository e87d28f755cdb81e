#include "qgraph/states.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qgraph {

namespace {

using cplx = std::complex<double>;

/// phi(s) = sum_j amp[j] * exp(rate[j] * s)
struct ExpForm {
  int terms = 0;
  cplx amp[2];
  cplx rate[2];
};

ExpForm exp_form(const Eigenstate& st, const Edge& e) {
  const auto& f = st.edges[static_cast<std::size_t>(e.id)];
  ExpForm out;
  if (st.k == 0.0) {
    out.terms = 1;
    out.amp[0] = f.c;
    out.rate[0] = 0.0;
    return out;
  }
  out.terms = 2;
  if (st.bound) {
    // c cosh + s sinh = (c+s)/2 e^{ks} + (c-s)/2 e^{-ks}
    out.amp[0] = 0.5 * (f.c + f.s);
    out.amp[1] = 0.5 * (f.c - f.s);
    out.rate[0] = st.k;
    out.rate[1] = -st.k;
  } else {
    // c cos + s sin = (c - i s)/2 e^{iks} + (c + i s)/2 e^{-iks}
    out.amp[0] = cplx(0.5 * f.c, -0.5 * f.s);
    out.amp[1] = cplx(0.5 * f.c, 0.5 * f.s);
    out.rate[0] = cplx(0.0, st.k);
    out.rate[1] = cplx(0.0, -st.k);
  }
  return out;
}

/// int_0^a e^{ws} ds and int_0^a s e^{ws} ds
void exp_integrals(cplx w, double a, cplx& j0, cplx& j1) {
  const cplx z = w * a;
  if (std::abs(z) < 0.1) {
    cplx term = 1.0;  // z^n / n!
    j0 = 0.0;
    j1 = 0.0;
    for (int n = 0; n < 14; ++n) {
      j0 += term / static_cast<double>(n + 1);
      j1 += term / static_cast<double>(n + 2);
      term *= z / static_cast<double>(n + 1);
    }
    j0 *= a;
    j1 *= a * a;
    return;
  }
  const cplx ez = std::exp(z);
  j0 = (ez - 1.0) / w;
  j1 = (ez * (z - 1.0) + 1.0) / (w * w);
}

int first_vertex_sign(const GraphSpec& g, const Eigenstate& st) {
  double big = 0.0;
  for (double a : st.vertex_amplitudes) big = std::max(big, std::abs(a));
  if (big > 0.0) {
    for (const auto& v : g.vertices()) {
      const double a = st.vertex_amplitudes[static_cast<std::size_t>(v.id)];
      if (std::abs(a) > 1e-8 * big) return a > 0.0 ? 1 : -1;
    }
  }
  // no vertex support: use the first edge coefficient that is clearly nonzero
  double biggest = 0.0;
  for (const auto& f : st.edges) biggest = std::max({biggest, std::abs(f.c), std::abs(f.s)});
  for (const auto& f : st.edges) {
    if (std::abs(f.c) > 1e-8 * biggest) return f.c > 0.0 ? 1 : -1;
    if (std::abs(f.s) > 1e-8 * biggest) return f.s > 0.0 ? 1 : -1;
  }
  return 1;
}

void scale(Eigenstate& st, double f) {
  for (auto& a : st.vertex_amplitudes) a *= f;
  for (auto& e : st.edges) {
    e.c *= f;
    e.s *= f;
  }
}

void axpy(Eigenstate& y, double a, const Eigenstate& x) {
  for (std::size_t i = 0; i < y.vertex_amplitudes.size(); ++i) y.vertex_amplitudes[i] += a * x.vertex_amplitudes[i];
  for (std::size_t i = 0; i < y.edges.size(); ++i) {
    y.edges[i].c += a * x.edges[i].c;
    y.edges[i].s += a * x.edges[i].s;
  }
}

}  // namespace

EdgeIntegrals edge_integrals(const Eigenstate& p, const Eigenstate& q, const Edge& e) {
  const ExpForm fp = exp_form(p, e);
  const ExpForm fq = exp_form(q, e);
  cplx o = 0.0;
  cplx f = 0.0;
  for (int i = 0; i < fp.terms; ++i) {
    for (int j = 0; j < fq.terms; ++j) {
      cplx j0;
      cplx j1;
      exp_integrals(fp.rate[i] + fq.rate[j], e.length, j0, j1);
      const cplx a = fp.amp[i] * fq.amp[j];
      o += a * j0;
      f += a * j1;
    }
  }
  return {o.real(), f.real()};
}

double overlap(const GraphSpec& g, const Eigenstate& p, const Eigenstate& q) {
  double sum = 0.0;
  for (const auto& e : g.edges()) sum += edge_integrals(p, q, e).overlap;
  return sum;
}

SpectralSolution normalize(const GraphSpec& g, SpectralSolution solution) {
  auto& st = solution.states;
  std::size_t i = 0;
  while (i < st.size()) {
    std::size_t j = i;
    while (j < st.size() && st[j].multiplet == st[i].multiplet) ++j;
    // modified Gram-Schmidt inside the multiplet [i, j)
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = i; b < a; ++b) axpy(st[a], -overlap(g, st[b], st[a]), st[b]);
      const double n2 = overlap(g, st[a], st[a]);
      if (!(n2 > 1e-300)) {
        throw std::runtime_error("normalize: state " + std::to_string(a) + " has zero norm (amplitude solver failure)");
      }
      scale(st[a], 1.0 / std::sqrt(n2));
    }
    for (std::size_t a = i; a < j; ++a) {
      if (first_vertex_sign(g, st[a]) < 0) scale(st[a], -1.0);
    }
    i = j;
  }
  return solution;
}

SpectralSolution solve_states(const GraphSpec& g, const SpectralOptions& options) {
  return normalize(g, solve_spectrum(g, options));
}

// --- MomentTable ---------------------------------------------------------------------

MomentTable::MomentTable(Eigen::MatrixXd x, Eigen::MatrixXd y, Eigen::VectorXd energies, std::vector<int> multiplet)
    : x_(std::move(x)), y_(std::move(y)), energies_(std::move(energies)), multiplet_(std::move(multiplet)) {
  if (multiplet_.empty()) {
    multiplet_.resize(static_cast<std::size_t>(energies_.size()));
    for (std::size_t i = 0; i < multiplet_.size(); ++i) multiplet_[i] = static_cast<int>(i);
  }
}

double MomentTable::r01_max() const { return std::sqrt(1.0 / (2.0 * e10())); }

Eigen::MatrixXd MomentTable::xi(int i) const { return r(i) / r01_max(); }

Eigen::VectorXd MomentTable::reduced_energies() const {
  return (energies_.array() - energies_(0)) / e10();
}

int MomentTable::whole_multiplets(int k) const {
  int n = std::min(k, size());
  while (n > 0 && n < size() && multiplet_[static_cast<std::size_t>(n)] == multiplet_[static_cast<std::size_t>(n - 1)]) ++n;
  return n;
}

nlohmann::json MomentTable::to_json() const {
  auto mat = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  nlohmann::json j;
  j["energies"] = std::vector<double>(energies_.data(), energies_.data() + energies_.size());
  j["multiplet"] = multiplet_;
  j["x"] = mat(x_);
  j["y"] = mat(y_);
  return j;
}

MomentTable MomentTable::from_json(const nlohmann::json& j) {
  const auto e = j.at("energies").get<std::vector<double>>();
  const auto n = static_cast<Eigen::Index>(e.size());
  auto mat = [n](const nlohmann::json& rows, const char* name) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      throw std::invalid_argument(std::string("moment table: /") + name + " must be a square array matching energies");
    }
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (static_cast<Eigen::Index>(row.size()) != n) {
        throw std::invalid_argument(std::string("moment table: /") + name + "/" + std::to_string(i) + " has wrong length");
      }
      for (Eigen::Index c = 0; c < n; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
  };
  std::vector<int> mult;
  if (j.contains("multiplet")) mult = j["multiplet"].get<std::vector<int>>();
  return MomentTable(mat(j.at("x"), "x"), mat(j.at("y"), "y"), Eigen::Map<const Eigen::VectorXd>(e.data(), n), mult);
}

MomentTable transition_moments(const GraphSpec& g, const SpectralSolution& states) {
  const auto n = static_cast<Eigen::Index>(states.states.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd en(n);
  std::vector<int> mult(static_cast<std::size_t>(n));
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto& sp = states.states[static_cast<std::size_t>(p)];
    en(p) = sp.energy;
    mult[static_cast<std::size_t>(p)] = sp.multiplet;
    for (Eigen::Index q = p; q < n; ++q) {
      const auto& sq = states.states[static_cast<std::size_t>(q)];
      double sx = 0.0;
      double sy = 0.0;
      for (const auto& e : g.edges()) {
        const auto ig = edge_integrals(sp, sq, e);
        sx += e.origin_offset.x * ig.overlap + std::cos(e.angle) * ig.first;
        sy += e.origin_offset.y * ig.overlap + std::sin(e.angle) * ig.first;
      }
      x(p, q) = x(q, p) = sx;
      y(p, q) = y(q, p) = sy;
    }
  }
  return MomentTable(std::move(x), std::move(y), std::move(en), std::move(mult));
}

// --- sum rules -------------------------------------------------------------------------

double truncated_sum_rule(const MomentTable& t, int n, int m, int k, Channel2D channel) {
  const auto& e = t.energies();
  const double e0 = e(0);
  const int kk = std::min(k, t.size());
  auto one = [&](const Eigen::MatrixXd& r) {
    double s = 0.0;
    for (int p = 0; p < kk; ++p) s += (2.0 * (e(p) - e0) - (e(n) - e0) - (e(m) - e0)) * r(n, p) * r(p, m);
    return s;
  };
  switch (channel) {
    case Channel2D::x: return one(t.x());
    case Channel2D::y: return one(t.y());
    case Channel2D::combined: return one(t.x()) + one(t.y());
  }
  return 0.0;
}

double SumRuleReport::worst_residual() const {
  int kmax = 0;
  for (const auto& e : entries) kmax = std::max(kmax, e.k);
  double worst = 0.0;
  for (const auto& e : entries) {
    if (e.k != kmax) continue;
    worst = std::max(worst, std::abs(e.combined - (e.n == e.m ? 1.0 : 0.0)));
  }
  return worst;
}

SumRuleReport sum_rule_diagnostics(const MomentTable& t, const std::vector<std::pair<int, int>>& pairs,
                                   const std::vector<int>& ks) {
  SumRuleReport rep;
  for (const auto& [n, m] : pairs) {
    if (n >= t.size() || m >= t.size()) continue;
    for (int k : ks) {
      const int kk = std::min(k, t.size());
      SumRuleReport::Entry en;
      en.n = n;
      en.m = m;
      en.k = kk;
      en.x = truncated_sum_rule(t, n, m, kk, Channel2D::x);
      en.y = truncated_sum_rule(t, n, m, kk, Channel2D::y);
      en.combined = en.x + en.y;
      rep.entries.push_back(en);
    }
  }
  return rep;
}

}  // namespace qgraph
