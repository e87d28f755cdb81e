#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMergeTol = 1e-8;

struct Basis {
  double c0;  // C(s)
  double s0;  // S(s)
  double dc;  // C'(s) / k
  double ds;  // S'(s) / k
};

Basis basis_at(double k, bool bound, double s) {
  if (k == 0.0) return {1.0, 0.0, 0.0, 0.0};
  const double t = k * s;
  if (bound) {
    const double ch = std::cosh(t);
    const double sh = std::sinh(t);
    return {ch, sh, sh, ch};
  }
  const double cs = std::cos(t);
  const double sn = std::sin(t);
  return {cs, sn, -sn, cs};
}

}  // namespace

const char* to_string(ModeFamily f) {
  switch (f) {
    case ModeFamily::determinant: return "determinant";
    case ModeFamily::loop_only: return "loop_only";
    case ModeFamily::zero: return "zero";
  }
  return "?";
}

double Eigenstate::value(const Edge& e, double s) const {
  const auto& f = edges[static_cast<std::size_t>(e.id)];
  const Basis b = basis_at(k, bound, s);
  return f.c * b.c0 + f.s * b.s0;
}

double Eigenstate::derivative(const Edge& e, double s) const {
  const auto& f = edges[static_cast<std::size_t>(e.id)];
  const Basis b = basis_at(k, bound, s);
  return k * (f.c * b.dc + f.s * b.ds);
}

std::pair<double, double> Eigenstate::end_amplitudes(const Edge& e) const {
  return {value(e, 0.0), value(e, e.length)};
}

std::vector<double> SpectralSolution::wavenumbers() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.k);
  return out;
}

std::vector<double> SpectralSolution::energies() const {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.energy);
  return out;
}

// --- vertex operator -----------------------------------------------------------

VertexOperator::VertexOperator(const GraphSpec& g) {
  row_.assign(g.vertex_count(), -1);
  for (const auto& v : g.vertices()) {
    if (v.kind == VertexKind::internal) {
      row_[static_cast<std::size_t>(v.id)] = static_cast<int>(rows_++);
      potential_.push_back(v.potential);
    }
  }
  for (const auto& e : g.edges()) {
    edges_.push_back({e.length, row_[static_cast<std::size_t>(e.from)], row_[static_cast<std::size_t>(e.to)]});
  }
  m_.resize(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(rows_));
}

void VertexOperator::fill(double energy) {
  m_.setZero();
  for (const auto& e : edges_) {
    double diag = 0.0;
    double off = 0.0;
    if (energy > 0.0) {
      const double k = std::sqrt(2.0 * energy);
      const double t = k * e.length;
      const double sn = std::sin(t);
      diag = -k * std::cos(t) / sn;
      off = k / sn;
    } else if (energy < 0.0) {
      const double kappa = std::sqrt(-2.0 * energy);
      const double t = kappa * e.length;
      diag = -kappa / std::tanh(t);
      off = t > 700.0 ? 0.0 : kappa / std::sinh(t);
    } else {
      diag = -1.0 / e.length;
      off = 1.0 / e.length;
    }
    if (e.a >= 0) m_(e.a, e.a) += diag;
    if (e.b >= 0) m_(e.b, e.b) += diag;
    if (e.a >= 0 && e.b >= 0) {
      m_(e.a, e.b) += off;
      m_(e.b, e.a) += off;
    }
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= 2.0 * potential_[i];
  }
}

int VertexOperator::dirichlet_count(double energy) const {
  if (energy <= 0.0) return 0;
  const double k = std::sqrt(2.0 * energy);
  int n = 0;
  for (const auto& e : edges_) {
    n += static_cast<int>(std::ceil(k * e.length / kPi)) - 1;
  }
  return n;
}

int VertexOperator::count_below(double energy) {
  int n = dirichlet_count(energy);
  if (rows_ == 0) return n;
  fill(energy);
  ldlt_.compute(m_);
  const auto& d = ldlt_.vectorD();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) > 0.0) ++n;
  }
  return n;
}

double VertexOperator::determinant(double energy) {
  if (rows_ == 0) return 1.0;
  fill(energy);
  ldlt_.compute(m_);
  return ldlt_.vectorD().prod();
}

const Eigen::MatrixXd& VertexOperator::matrix(double energy) {
  fill(energy);
  return m_;
}

double VertexOperator::min_abs_sine(double energy) const {
  if (energy <= 0.0) return 1.0;
  const double k = std::sqrt(2.0 * energy);
  double m = 1.0;
  for (const auto& e : edges_) m = std::min(m, std::abs(std::sin(k * e.length)));
  return m;
}

// --- level isolation -------------------------------------------------------------

namespace {

class LevelFinder {
 public:
  LevelFinder(VertexOperator& op, int wanted, double rel_tol) : op_(op), wanted_(wanted), tol_(rel_tol) {}

  /// Positive-energy levels in (lo, hi] by wavenumber.
  void isolate_k(double lo, double hi, int nlo, int nhi) {
    if (nlo >= wanted_ || nhi == nlo) return;
    if (hi - lo <= tol_ * hi) {
      out.push_back({0.5 * (lo + hi), false, nhi - nlo, ModeFamily::determinant});
      return;
    }
    const double elo = 0.5 * lo * lo;
    const double ehi = 0.5 * hi * hi;
    if (nhi - nlo == 1 && op_.dirichlet_count(elo) == op_.dirichlet_count(ehi)) {
      auto det = [&](double k) { return op_.determinant(0.5 * k * k); };
      const double flo = det(lo);
      const double fhi = det(hi);
      if (flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0)) {
        out.push_back({refine(det, lo, hi, flo, fhi), false, 1, ModeFamily::determinant});
        return;
      }
    }
    const double mid = 0.5 * (lo + hi);
    const int nmid = op_.count_below_k(mid);
    isolate_k(lo, mid, nlo, nmid);
    isolate_k(mid, hi, nmid, nhi);
  }

  /// Bound levels in (lo, hi] by energy (hi < 0).
  void isolate_e(double lo, double hi, int nlo, int nhi) {
    if (nlo >= wanted_ || nhi == nlo) return;
    const double klo = std::sqrt(-2.0 * lo);
    const double khi = std::sqrt(-2.0 * hi);
    if (klo - khi <= tol_ * klo) {
      out.push_back({0.5 * (klo + khi), true, nhi - nlo, ModeFamily::determinant});
      return;
    }
    if (nhi - nlo == 1) {
      auto det = [&](double kappa) { return op_.determinant(-0.5 * kappa * kappa); };
      const double fa = det(khi);
      const double fb = det(klo);
      if (fa == 0.0 || fb == 0.0 || (fa < 0.0) != (fb < 0.0)) {
        out.push_back({refine(det, khi, klo, fa, fb), true, 1, ModeFamily::determinant});
        return;
      }
    }
    const double mid = 0.5 * (lo + hi);
    const int nmid = op_.count_below(mid);
    isolate_e(lo, mid, nlo, nmid);
    isolate_e(mid, hi, nmid, nhi);
  }

  std::vector<Level> out;

 private:
  template <class F>
  double refine(F& f, double lo, double hi, double flo, double fhi) const {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 6);
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
  }

  VertexOperator& op_;
  int wanted_;
  double tol_;
};

}  // namespace

std::vector<Level> find_levels(const GraphSpec& g, int count, double rel_tol) {
  if (count <= 0) return {};
  VertexOperator op(g);
  const double length = g.total_length();
  LevelFinder finder(op, count, rel_tol);

  int below = 0;
  if (g.closed() && !g.has_potentials()) {
    finder.out.push_back({0.0, false, 1, ModeFamily::zero});
    below = 1;
  }
  const auto pots = g.potentials();
  const bool attractive = std::any_of(pots.begin(), pots.end(), [](double a) { return a < 0.0; });
  if (attractive) {
    double sum = 0.0;
    for (double a : pots) sum += std::abs(a);
    double elo = -2.0 * sum * sum - 1.0;
    while (op.count_below(elo) > 0) elo *= 2.0;
    const double ehi = -1e-12;
    below = op.count_below(ehi);
    finder.isolate_e(elo, ehi, 0, below);
  }

  const double klo = 1e-3 * kPi / length;
  int nlo = op.count_below_k(klo);
  if (nlo > below) {
    finder.isolate_k(1e-3 * klo, klo, below, nlo);
  }
  double khi = kPi * (count + static_cast<double>(g.vertex_count()) + 2.0) / length;
  int nhi = op.count_below_k(khi);
  while (nhi < count) {
    khi *= 1.25;
    nhi = op.count_below_k(khi);
  }
  finder.isolate_k(klo, khi, nlo, nhi);

  auto levels = std::move(finder.out);
  std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.energy() < b.energy(); });
  // A degenerate level next to an edge resonance can come out as two simple
  // roots a few ulps of the count apart; those are one multiplet.
  std::vector<Level> merged;
  for (const auto& l : levels) {
    if (!merged.empty()) {
      auto& p = merged.back();
      if (p.bound == l.bound && p.family == l.family && std::abs(p.k - l.k) <= kMergeTol * std::max(l.k, 1.0)) {
        p.k = (p.k * p.multiplicity + l.k * l.multiplicity) / (p.multiplicity + l.multiplicity);
        p.multiplicity += l.multiplicity;
        continue;
      }
    }
    merged.push_back(l);
  }
  levels = std::move(merged);
  // Multiplets on an edge resonance (k l = n pi) are only located to the count
  // blur there; snap to the resonance when the whole multiplet jumps across it.
  for (auto& l : levels) {
    if (l.bound || l.multiplicity < 2 || l.k <= 0.0) continue;
    for (const auto& e : g.edges()) {
      const double r = std::round(l.k * e.length / kPi) * kPi / e.length;
      if (r <= 0.0 || std::abs(r - l.k) > kMergeTol * std::max(l.k, 1.0)) continue;
      const double h = kMergeTol * std::max(r, 1.0);
      const int lo = op.count_below_k(r - h);
      if (op.count_below_k(r + h) - lo == l.multiplicity) {
        l.k = r;
        break;
      }
    }
  }
  // keep whole multiplets up to the requested count
  std::vector<Level> kept;
  int n = 0;
  for (const auto& l : levels) {
    if (n >= count) break;
    kept.push_back(l);
    n += l.multiplicity;
  }
  return kept;
}

// --- amplitudes ------------------------------------------------------------------

namespace {

std::vector<EdgeFunction> edges_from_vertices(const GraphSpec& g, const std::vector<double>& amp, double k, bool bound) {
  std::vector<EdgeFunction> out(g.edge_count());
  for (const auto& e : g.edges()) {
    const double a = amp[static_cast<std::size_t>(e.from)];
    const double b = amp[static_cast<std::size_t>(e.to)];
    const double t = k * e.length;
    double cn = 0.0;
    double sn = 0.0;
    if (bound) {
      cn = std::cosh(t);
      sn = std::sinh(t);
    } else {
      cn = std::cos(t);
      sn = std::sin(t);
    }
    out[static_cast<std::size_t>(e.id)] = {a, (b - a * cn) / sn};
  }
  return out;
}

std::vector<double> vertices_from_edges(const GraphSpec& g, const std::vector<EdgeFunction>& f, double k, bool bound) {
  std::vector<double> amp(g.vertex_count(), 0.0);
  std::vector<int> seen(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    const auto& fe = f[static_cast<std::size_t>(e.id)];
    const Basis b = basis_at(k, bound, e.length);
    amp[static_cast<std::size_t>(e.from)] += fe.c;
    amp[static_cast<std::size_t>(e.to)] += fe.c * b.c0 + fe.s * b.s0;
    ++seen[static_cast<std::size_t>(e.from)];
    ++seen[static_cast<std::size_t>(e.to)];
  }
  for (std::size_t v = 0; v < amp.size(); ++v) {
    amp[v] = g.vertices()[v].kind == VertexKind::terminal ? 0.0 : amp[v] / seen[v];
  }
  return amp;
}

Eigen::MatrixXd boundary_matrix(const GraphSpec& g, double k, bool bound) {
  const auto n = static_cast<Eigen::Index>(2 * g.edge_count());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index row = 0;
  for (const auto& v : g.vertices()) {
    // (column of c, value coefficient of c, value coefficient of s, outward/k of c, outward/k of s)
    struct End {
      Eigen::Index col;
      double vc, vs, oc, os;
    };
    std::vector<End> ends;
    for (int eid : g.incident(v.id)) {
      const auto& e = g.edges()[static_cast<std::size_t>(eid)];
      const Eigen::Index col = 2 * static_cast<Eigen::Index>(eid);
      if (e.from == v.id) {
        ends.push_back({col, 1.0, 0.0, 0.0, 1.0});
      } else {
        const Basis b = basis_at(k, bound, e.length);
        ends.push_back({col, b.c0, b.s0, -b.dc, -b.ds});
      }
    }
    if (v.kind == VertexKind::terminal) {
      m(row, ends[0].col) = ends[0].vc;
      m(row, ends[0].col + 1) = ends[0].vs;
      ++row;
      continue;
    }
    for (std::size_t j = 1; j < ends.size(); ++j) {
      m(row, ends[j].col) += ends[j].vc;
      m(row, ends[j].col + 1) += ends[j].vs;
      m(row, ends[0].col) -= ends[0].vc;
      m(row, ends[0].col + 1) -= ends[0].vs;
      ++row;
    }
    const double w = 2.0 * v.potential / k;
    for (const auto& en : ends) {
      m(row, en.col) += en.oc;
      m(row, en.col + 1) += en.os;
    }
    m(row, ends[0].col) -= w * ends[0].vc;
    m(row, ends[0].col + 1) -= w * ends[0].vs;
    ++row;
  }
  return m;
}

double edge_norm2(const Eigenstate& st, const Edge& e) {
  const auto& f = st.edges[static_cast<std::size_t>(e.id)];
  const double a = e.length;
  const double k = st.k;
  if (k == 0.0) return f.c * f.c * a;
  if (st.bound) {
    const double sh2 = std::sinh(2.0 * k * a) / (4.0 * k);
    const double sh = std::sinh(k * a);
    return f.c * f.c * (0.5 * a + sh2) + f.s * f.s * (sh2 - 0.5 * a) + f.c * f.s * sh * sh / k;
  }
  const double s2 = std::sin(2.0 * k * a) / (4.0 * k);
  const double sn = std::sin(k * a);
  return f.c * f.c * (0.5 * a + s2) + f.s * f.s * (0.5 * a - s2) + f.c * f.s * sn * sn / k;
}

}  // namespace

std::vector<Eigenstate> solve_amplitudes(const GraphSpec& g, const Level& level, double sine_guard) {
  std::vector<Eigenstate> out;
  const int m = level.multiplicity;
  if (level.family == ModeFamily::zero || (level.k == 0.0 && !level.bound)) {
    Eigenstate st;
    st.family = ModeFamily::zero;
    st.vertex_amplitudes.assign(g.vertex_count(), 1.0);
    st.edges.assign(g.edge_count(), {1.0, 0.0});
    out.push_back(std::move(st));
    return out;
  }
  const double energy = level.energy();
  VertexOperator op(g);

  bool vertex_route = op.size() > 0 && op.min_abs_sine(energy) > sine_guard && op.size() >= m;
  if (vertex_route) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix(energy));
    const auto& ev = es.eigenvalues();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev(a)) < std::abs(ev(b)); });
    const double scale = ev.cwiseAbs().maxCoeff() + 1.0;
    if (std::abs(ev(order[static_cast<std::size_t>(m - 1)])) > 1e-7 * scale) vertex_route = false;
    if (vertex_route) {
      const auto& rows = op.row_of_vertex();
      for (int j = 0; j < m; ++j) {
        const auto vec = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
        Eigenstate st;
        st.k = level.k;
        st.bound = level.bound;
        st.vertex_amplitudes.assign(g.vertex_count(), 0.0);
        for (std::size_t v = 0; v < rows.size(); ++v) {
          if (rows[v] >= 0) st.vertex_amplitudes[v] = vec(rows[v]);
        }
        st.edges = edges_from_vertices(g, st.vertex_amplitudes, level.k, level.bound);
        out.push_back(std::move(st));
      }
      double worst = 0.0;
      for (const auto& st : out) {
        for (const auto& v : g.vertices()) {
          if (v.kind == VertexKind::internal) worst = std::max(worst, std::abs(flux_residual(g, st, v.id)));
        }
      }
      if (worst > 1e-9 * scale) {
        vertex_route = false;
        out.clear();
      }
    }
  }
  if (!vertex_route) {
    const Eigen::MatrixXd bm = boundary_matrix(g, level.k, level.bound);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(bm, Eigen::ComputeFullV);
    const auto& vmat = svd.matrixV();
    const Eigen::Index n = vmat.cols();
    for (int j = 0; j < m; ++j) {
      const auto col = vmat.col(n - 1 - j);
      Eigenstate st;
      st.k = level.k;
      st.bound = level.bound;
      st.edges.resize(g.edge_count());
      for (std::size_t e = 0; e < g.edge_count(); ++e) {
        st.edges[e] = {col(static_cast<Eigen::Index>(2 * e)), col(static_cast<Eigen::Index>(2 * e + 1))};
      }
      st.vertex_amplitudes = vertices_from_edges(g, st.edges, level.k, level.bound);
      out.push_back(std::move(st));
    }
  }

  const auto bridges = bridge_edges(g);
  const bool any_bridge = std::any_of(bridges.begin(), bridges.end(), [](bool b) { return b; });
  for (auto& st : out) {
    st.energy = energy;
    st.family = ModeFamily::determinant;
    if (g.cycle_rank() == 0) continue;
    double total = 0.0;
    double on_bridges = 0.0;
    for (const auto& e : g.edges()) {
      const double n2 = edge_norm2(st, e);
      total += n2;
      if (bridges[static_cast<std::size_t>(e.id)]) on_bridges += n2;
    }
    const bool no_bridge_support = !any_bridge || on_bridges < 1e-18 * total;
    double center = 0.0;
    for (const auto& v : g.vertices()) {
      if (v.degree >= 3) center = std::max(center, std::abs(st.vertex_amplitudes[static_cast<std::size_t>(v.id)]));
    }
    if (no_bridge_support && center < 1e-9 * std::sqrt(total)) st.family = ModeFamily::loop_only;
    if (!any_bridge) st.family = ModeFamily::loop_only;
  }
  return out;
}

SpectralSolution solve_spectrum(const GraphSpec& g, const SpectralOptions& options) {
  SpectralSolution sol;
  const auto levels = find_levels(g, options.states, options.rel_tol);
  int multiplet = 0;
  for (const auto& l : levels) {
    auto states = solve_amplitudes(g, l, options.sine_guard);
    for (auto& st : states) {
      st.multiplet = multiplet;
      st.multiplicity = l.multiplicity;
      sol.states.push_back(std::move(st));
    }
    ++multiplet;
  }
  return sol;
}

double flux_residual(const GraphSpec& g, const Eigenstate& st, int v) {
  double sum = 0.0;
  for (int eid : g.incident(v)) {
    const auto& e = g.edges()[static_cast<std::size_t>(eid)];
    sum += e.from == v ? st.derivative(e, 0.0) : -st.derivative(e, e.length);
  }
  sum -= 2.0 * g.vertices()[static_cast<std::size_t>(v)].potential * st.vertex_amplitudes[static_cast<std::size_t>(v)];
  return st.k == 0.0 ? sum : sum / st.k;
}

// --- degenerate 3-star -----------------------------------------------------------

DegenerateSolution solve_degenerate(double a, double b, double c, double k, double tol) {
  const double len[3] = {a, b, c};
  bool zero[3];
  int nz = 0;
  for (int i = 0; i < 3; ++i) {
    zero[i] = std::abs(std::sin(k * len[i])) < tol;
    nz += zero[i] ? 1 : 0;
  }
  if (nz == 0) throw std::invalid_argument("solve_degenerate: no prong sine vanishes at k");
  DegenerateSolution out;
  if (nz == 3) {
    out.kind = DegenerateSolution::Kind::pair;
    const double ca = std::cos(k * a);
    const double cb = std::cos(k * b);
    const double cc = std::cos(k * c);
    const double b1 = -(cc + ca) / cb;
    const double c2 = -(a * cb - b * b1 * ca) / (c * cb - b * b1 * cc);
    const double b2 = -(ca + c2 * cc) / cb;
    out.states.push_back({1.0, b1, 1.0});
    out.states.push_back({1.0, b2, c2});
    return out;
  }
  // relabel so that the vanishing prongs come first
  int p[3] = {0, 1, 2};
  std::stable_partition(p, p + 3, [&](int i) { return zero[i]; });
  const double la = len[p[0]];
  const double lb = len[p[1]];
  const double lc = len[p[2]];
  double amp[3] = {0.0, 0.0, 0.0};
  if (nz == 1) {
    out.kind = DegenerateSolution::Kind::one_sine;
    const double cc = 1.0;
    const double bb = cc * std::sin(k * lc) / std::sin(k * lb);
    const double aa = -bb * std::sin(k * (lb + lc)) / (std::cos(k * la) * std::sin(k * lc));
    amp[p[0]] = aa;
    amp[p[1]] = bb;
    amp[p[2]] = cc;
  } else {
    out.kind = DegenerateSolution::Kind::two_sines;
    const double bb = 1.0;
    const double aa = -bb * std::cos(k * lb) / std::cos(k * la);
    amp[p[0]] = aa;
    amp[p[1]] = bb;
    amp[p[2]] = 0.0;
  }
  out.states.push_back({amp[0], amp[1], amp[2]});
  return out;
}

// --- special modes ---------------------------------------------------------------

std::vector<SpecialMode> enumerate_special_modes(const GraphSpec& g, double k_max) {
  std::vector<SpecialMode> out;
  if (g.closed() && !g.has_potentials()) out.push_back({0.0, 1, ModeFamily::zero, 0.0});
  const auto d = motif_decompose(g);
  for (const auto& ch : d.channels) {
    const bool pure = ch.kind == Channel::Kind::closed_cycle;
    if (!pure && ch.kind != Channel::Kind::loop) continue;
    const double step = 2.0 * kPi / ch.length;
    for (int n = 1; n * step <= k_max; ++n) {
      out.push_back({n * step, pure ? 2 : 1, ModeFamily::loop_only, ch.length});
    }
  }
  std::sort(out.begin(), out.end(), [](const SpecialMode& a, const SpecialMode& b) { return a.k < b.k; });
  return out;
}

std::vector<bool> bridge_edges(const GraphSpec& g) {
  const std::size_t nv = g.vertex_count();
  std::vector<bool> bridge(g.edge_count(), false);
  std::vector<int> disc(nv, -1);
  std::vector<int> low(nv, 0);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int parent_edge) {
    disc[static_cast<std::size_t>(u)] = low[static_cast<std::size_t>(u)] = timer++;
    for (int eid : g.incident(u)) {
      if (eid == parent_edge) continue;
      const auto& e = g.edges()[static_cast<std::size_t>(eid)];
      const int w = e.from == u ? e.to : e.from;
      if (disc[static_cast<std::size_t>(w)] < 0) {
        dfs(w, eid);
        low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], low[static_cast<std::size_t>(w)]);
        if (low[static_cast<std::size_t>(w)] > disc[static_cast<std::size_t>(u)]) bridge[static_cast<std::size_t>(eid)] = true;
      } else {
        low[static_cast<std::size_t>(u)] = std::min(low[static_cast<std::size_t>(u)], disc[static_cast<std::size_t>(w)]);
      }
    }
  };
  dfs(0, -1);
  return bridge;
}

}  // namespace qgraph
