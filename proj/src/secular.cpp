#include "qgraph/secular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;

double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi) {
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 6);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double secular_3star(double a, double b, double c, double k) {
  const double l = a + b + c;
  const double l1 = std::abs(a + b - c);
  const double l2 = std::abs(a - b + c);
  const double l3 = std::abs(a - b - c);
  return 0.25 * (std::cos(k * l1) + std::cos(k * l2) + std::cos(k * l3) - 3.0 * std::cos(k * l));
}

double secular_nstar(const std::vector<double>& lengths, double k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    double term = std::cos(k * lengths[i]);
    for (std::size_t j = 0; j < lengths.size(); ++j) {
      if (j != i) term *= std::sin(k * lengths[j]);
    }
    sum += term;
  }
  return sum;
}

double secular_4star(double a, double b, double c, double d, double k) {
  return 0.5 * (std::sin(k * (a + b)) * std::cos(k * (c - d)) + std::cos(k * (a - b)) * std::sin(k * (c + d)) -
                std::sin(k * (a + b + c + d)));
}

double secular_lollipop(double a, double loop, double k) {
  return 0.5 * (3.0 * std::cos(k * (a + 0.5 * loop)) - std::cos(k * (a - 0.5 * loop)));
}

double secular_star_star(double a, double b, double c, double d, double e, double k) {
  return secular_3star(a, b, e, k) * secular_3star(c, d, e, k) -
         std::sin(k * a) * std::sin(k * b) * std::sin(k * c) * std::sin(k * d);
}

double secular_star_star_expanded(double a, double b, double c, double d, double e, double k) {
  auto s = [k](double x) { return std::sin(k * x); };
  return -4.0 * s(a) * s(b) * s(c) * s(d) * s(e) - 2.0 * s(a + b + c + d + e) + s(a + b - c - d + e) -
         s(a + b - c - d - e) + 0.5 * s(a + b + c - d + e) + 0.5 * s(a + b + c - d - e) +
         0.5 * s(a + b - c + d + e) + 0.5 * s(a + b - c + d - e) + 0.5 * s(a - b + c + d + e) +
         0.5 * s(a - b + c + d - e) - 0.5 * s(a - b - c - d + e) - 0.5 * s(a - b - c - d - e);
}

double secular_pop_star(double a, double b, double c, double loop, double k) {
  return secular_3star(a, b, c, k) * secular_lollipop(a, loop, k) -
         std::sin(k * b) * std::sin(k * c) * std::cos(0.5 * k * loop);
}

double secular_bubble(double a, double b, double c, double d, double l1, double l2, double k) {
  const double ss = std::sin(k * l1) + std::sin(k * l2);
  return secular_4star(a, b, l1, l2, k) * secular_4star(c, d, l1, l2, k) -
         std::sin(k * a) * std::sin(k * b) * std::sin(k * c) * std::sin(k * d) * ss * ss;
}

double secular_delta_wire(double length, double s0, double g, double k) {
  if (!(s0 > 0.0 && s0 < length)) throw std::invalid_argument("secular_delta_wire: s0 must lie inside (0, L)");
  return std::sin(k * length) + 2.0 * g / (k * length) * std::sin(k * s0) * std::sin(k * (length - s0));
}

// --- SecularSystem ------------------------------------------------------------------

namespace {

struct RowTrig {
  double diag = 0.0;
  std::vector<double> off;  // per link, zero for non-couplings
};

RowTrig row_trig(const SecularSystem::Row& r, double k) {
  std::vector<double> sn;
  std::vector<double> cs;
  std::vector<int> link_of;
  double loop_cos = 1.0;
  std::vector<double> hs;
  std::vector<double> hc;
  for (std::size_t i = 0; i < r.links.size(); ++i) {
    const auto& l = r.links[i];
    if (l.kind == Channel::Kind::loop) {
      hs.push_back(std::sin(0.5 * k * l.length));
      hc.push_back(std::cos(0.5 * k * l.length));
      loop_cos *= hc.back();
    } else {
      sn.push_back(std::sin(k * l.length));
      cs.push_back(std::cos(k * l.length));
      link_of.push_back(static_cast<int>(i));
    }
  }
  const std::size_t n = sn.size();
  // products of all sines but one, via prefix and suffix products
  std::vector<double> pre(n + 1, 1.0);
  std::vector<double> suf(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] * sn[i];
  for (std::size_t i = n; i > 0; --i) suf[i - 1] = suf[i] * sn[i - 1];
  const double all_sines = pre[n];

  RowTrig out;
  out.off.assign(r.links.size(), 0.0);
  double cot_part = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double others = pre[i] * suf[i + 1];
    cot_part += cs[i] * others;
    if (r.links[static_cast<std::size_t>(link_of[i])].kind == Channel::Kind::coupling) {
      out.off[static_cast<std::size_t>(link_of[i])] = others * loop_cos;
    }
  }
  double tan_part = 0.0;
  for (std::size_t l = 0; l < hs.size(); ++l) {
    double others = 1.0;
    for (std::size_t m = 0; m < hc.size(); ++m) {
      if (m != l) others *= hc[m];
    }
    tan_part += hs[l] * others;
  }
  out.diag = cot_part * loop_cos - 2.0 * tan_part * all_sines + 2.0 * r.potential / k * all_sines * loop_cos;
  return out;
}

}  // namespace

Eigen::MatrixXd SecularSystem::matrix(double k) const {
  const auto n = static_cast<Eigen::Index>(rows_.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows_[static_cast<std::size_t>(i)];
    const RowTrig t = row_trig(r, k);
    m(i, i) += t.diag;
    for (std::size_t l = 0; l < r.links.size(); ++l) {
      if (r.links[l].kind == Channel::Kind::coupling) m(i, r.links[l].other) -= t.off[l];
    }
  }
  return m;
}

double SecularSystem::determinant(double k) const {
  if (trivial_) return 1.0;
  if (rows_.empty()) return std::sin(k * bare_length_);
  if (rows_.size() == 1) return matrix(k)(0, 0);
  return matrix(k).partialPivLu().determinant();
}

double SecularSystem::reduced(double k) const {
  double d = determinant(k);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& l : rows_[i].links) {
      if (l.kind == Channel::Kind::coupling && static_cast<std::size_t>(l.other) > i) d /= std::sin(k * l.length);
    }
  }
  return d;
}

Eigen::MatrixXd SecularSystem::null_space(double k, int dimension) const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix(k), Eigen::ComputeFullV);
  const auto& v = svd.matrixV();
  return v.rightCols(dimension).rowwise().reverse();
}

std::vector<double> SecularSystem::three_star_lengths() const {
  std::vector<double> out;
  if (!three_star_) return out;
  for (const auto& l : rows_[0].links) out.push_back(l.length);
  return out;
}

SecularSystem assemble_composite(const Decomposition& d) {
  SecularSystem sys;
  std::map<int, int> row_of_center;
  for (std::size_t i = 0; i < d.motifs.size(); ++i) {
    if (!row_of_center.emplace(d.motifs[i].center, static_cast<int>(i)).second) {
      throw std::invalid_argument("assemble_composite: two motifs share center " + std::to_string(d.motifs[i].center));
    }
  }
  std::vector<int> claims(d.channels.size(), 0);
  for (const auto& m : d.motifs) {
    SecularSystem::Row row;
    row.center = m.center;
    row.potential = m.potential;
    for (int c : m.channels) {
      if (c < 0 || static_cast<std::size_t>(c) >= d.channels.size()) {
        throw std::invalid_argument("assemble_composite: channel index out of range");
      }
      const auto& ch = d.channels[static_cast<std::size_t>(c)];
      if (ch.start != m.center && ch.end != m.center) {
        throw std::invalid_argument("assemble_composite: channel " + std::to_string(c) + " does not touch center " +
                                    std::to_string(m.center));
      }
      ++claims[static_cast<std::size_t>(c)];
      SecularSystem::Link link{ch.kind, ch.length, -1};
      if (ch.kind == Channel::Kind::coupling) {
        const int far = ch.start == m.center ? ch.end : ch.start;
        const auto it = row_of_center.find(far);
        if (it == row_of_center.end()) {
          throw std::invalid_argument("assemble_composite: coupling channel " + std::to_string(c) +
                                      " ends on a vertex that is not a motif center");
        }
        link.other = it->second;
      } else if (ch.kind != Channel::Kind::loop && ch.kind != Channel::Kind::terminal) {
        throw std::invalid_argument("assemble_composite: motif claims a path channel");
      }
      row.links.push_back(link);
    }
    sys.rows_.push_back(std::move(row));
  }
  bool closed = true;
  for (std::size_t c = 0; c < d.channels.size(); ++c) {
    const auto& ch = d.channels[c];
    const int n = claims[c];
    if (n > 2) throw std::invalid_argument("assemble_composite: channel " + std::to_string(c) + " claimed by more than two motifs");
    const int want = ch.kind == Channel::Kind::coupling ? 2 : (ch.kind == Channel::Kind::loop || ch.kind == Channel::Kind::terminal ? 1 : 0);
    if (n != want) throw std::invalid_argument("assemble_composite: channel " + std::to_string(c) + " has inconsistent wiring");
    sys.total_length_ += ch.length;
    if (ch.kind == Channel::Kind::terminal || ch.kind == Channel::Kind::open_path) closed = false;
    if (ch.kind == Channel::Kind::loop) sys.special_.push_back({2.0 * kPi / ch.length, 1, ModeFamily::loop_only, ch.length});
    if (ch.kind == Channel::Kind::closed_cycle) {
      sys.special_.push_back({2.0 * kPi / ch.length, 2, ModeFamily::loop_only, ch.length});
      sys.trivial_ = true;
    }
    if (ch.kind == Channel::Kind::open_path) sys.bare_length_ = ch.length;
  }
  if (d.motifs.empty() && d.channels.size() != 1) {
    throw std::invalid_argument("assemble_composite: a decomposition without motifs must be a single path or cycle");
  }
  const bool dressed = std::any_of(d.motifs.begin(), d.motifs.end(), [](const MotifInstance& m) { return m.potential != 0.0; });
  if (closed && !dressed) sys.special_.insert(sys.special_.begin(), {0.0, 1, ModeFamily::zero, 0.0});
  sys.channel_count_ = static_cast<int>(d.channels.size());
  sys.three_star_ = sys.rows_.size() == 1 && sys.rows_[0].potential == 0.0 && sys.rows_[0].links.size() == 3 &&
                    std::all_of(sys.rows_[0].links.begin(), sys.rows_[0].links.end(),
                                [](const SecularSystem::Link& l) { return l.kind == Channel::Kind::terminal; });
  return sys;
}

SecularSystem SecularSystem::three_star(double a, double b, double c) {
  const auto g = build_graph({{0, 0}, {a, 0}, {0, b}, {-c, 0}}, {{0, 1}, {0, 2}, {0, 3}});
  return assemble_composite(motif_decompose(g));
}

SecularSystem SecularSystem::from_graph(const GraphSpec& g) {
  SecularSystem sys = assemble_composite(motif_decompose(g));
  auto shared = std::make_shared<const GraphSpec>(g);
  const auto pots = g.potentials();
  const bool attractive = std::any_of(pots.begin(), pots.end(), [](double a) { return a < 0.0; });
  // bound states lie off the real-k axis the scan covers
  sys.counter_ = [shared, attractive](double k) {
    VertexOperator op(*shared);
    return op.count_below_k(k) - (attractive ? op.count_below(-1e-12) : 0);
  };
  return sys;
}

// --- root finding ------------------------------------------------------------------

namespace {

void push_merged(std::vector<Level>& levels, Level l, double rel) {
  for (auto& x : levels) {
    if (std::abs(x.k - l.k) <= rel * std::max(1.0, l.k)) {
      x.multiplicity += l.multiplicity;
      if (l.family == ModeFamily::determinant) x.family = ModeFamily::determinant;
      return;
    }
  }
  levels.push_back(l);
}

std::vector<Level> three_star_roots(const SecularSystem& sys, double k_max) {
  const auto len = sys.three_star_lengths();
  const double l = sys.total_length();
  std::function<double(double)> f = [&](double k) { return secular_3star(len[0], len[1], len[2], k); };
  std::vector<Level> out;
  const double sep = kPi / l;
  bool skip_next = false;
  for (int n = 0; n * sep < k_max; ++n) {
    const double edge = 1e-9 * sep;
    const double lo = n == 0 ? 1e-6 * sep : n * sep + edge;
    const double hi = std::min((n + 1) * sep - edge, k_max);
    if (hi <= lo) break;
    const double flo = f(lo);
    const double fhi = f(hi);
    if ((flo < 0.0) != (fhi < 0.0)) {
      const double r = refine_root(f, lo, hi, flo, fhi);
      if (!(skip_next && r - n * sep < 1e-6 * sep)) out.push_back({r, false, 1, ModeFamily::determinant});
    }
    skip_next = false;
    // a root sitting on the separator itself (rational prongs)
    const double s = (n + 1) * sep;
    if (s <= k_max) {
      const double fs = f(s);
      if (std::abs(fs) < 1e-12) {
        const double h = 1e-6 * sep;
        const double slope = (f(s + h) - f(s - h)) / (2.0 * h);
        // drop the cell roots that are this separator root seen from inside
        std::erase_if(out, [&](const Level& x) { return std::abs(x.k - s) < 1e-6 * sep; });
        out.push_back({s, false, std::abs(slope) < 1e-5 ? 2 : 1, ModeFamily::determinant});
        skip_next = true;
      }
    }
  }
  return out;
}

std::vector<Level> scan_roots(const SecularSystem& sys, double k_max, double step) {
  std::function<double(double)> f = [&](double k) { return sys.reduced(k); };
  std::vector<Level> out;
  const double k0 = 1e-3 * kPi / sys.total_length();
  const int n = static_cast<int>(std::ceil((k_max - k0) / step));
  std::vector<double> ks(static_cast<std::size_t>(n + 1));
  std::vector<double> fs(ks.size());
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    ks[static_cast<std::size_t>(i)] = std::min(k0 + i * step, k_max);
    fs[static_cast<std::size_t>(i)] = f(ks[static_cast<std::size_t>(i)]);
    scale = std::max(scale, std::abs(fs[static_cast<std::size_t>(i)]));
  }
  auto sgn = [](double x) { return x < 0.0 ? -1 : 1; };
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (fs[i - 1] == 0.0) continue;
    if (fs[i] == 0.0 || sgn(fs[i - 1]) != sgn(fs[i])) {
      out.push_back({refine_root(f, ks[i - 1], ks[i], fs[i - 1], fs[i]), false, 1, ModeFamily::determinant});
    }
  }
  // touching roots and close pairs hide between grid points without a sign change
  for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
    const int s = sgn(fs[i]);
    if (sgn(fs[i - 1]) != s || sgn(fs[i + 1]) != s) continue;
    if (!(std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) < std::abs(fs[i + 1]))) continue;
    auto g = [&](double k) { return s * f(k); };
    const auto m = boost::math::tools::brent_find_minima(g, ks[i - 1], ks[i + 1], std::numeric_limits<double>::digits / 2);
    const double km = m.first;
    const double gm = m.second;
    if (gm < 0.0) {
      const double a = refine_root(f, ks[i - 1], km, fs[i - 1], f(km));
      const double b = refine_root(f, km, ks[i + 1], f(km), fs[i + 1]);
      out.push_back({a, false, 1, ModeFamily::determinant});
      out.push_back({b, false, 1, ModeFamily::determinant});
    } else if (gm < 1e-10 * scale) {
      const double h = 1e-6 * step;
      const double slope = (f(km + h) - f(km - h)) / (2.0 * h);
      if (std::abs(slope) < 1e-4 * scale * sys.total_length()) out.push_back({km, false, 2, ModeFamily::determinant});
    }
  }
  return out;
}

}  // namespace

RootSet find_roots(const SecularSystem& system, double k_max) {
  const double l = system.total_length();
  RootSet rs;
  double step = kPi / (20.0 * l);
  const int expected = system.has_counter() ? system.count_below(std::nextafter(k_max, 2.0 * k_max)) : -1;
  for (int attempt = 0; attempt < 7; ++attempt) {
    std::vector<Level> det;
    if (system.is_three_star()) {
      det = three_star_roots(system, k_max);
    } else if (!system.is_trivial()) {
      det = scan_roots(system, k_max, step);
    }
    std::vector<Level> levels;
    for (const auto& sm : system.special_modes()) {
      if (sm.family == ModeFamily::zero) {
        push_merged(levels, {0.0, false, 1, ModeFamily::zero}, 1e-10);
        continue;
      }
      for (int n = 1; n * sm.k <= k_max; ++n) push_merged(levels, {n * sm.k, false, sm.multiplicity, sm.family}, 1e-10);
    }
    for (const auto& x : det) push_merged(levels, x, 1e-10);
    std::sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.k < b.k; });
    int found = 0;
    for (const auto& x : levels) found += x.multiplicity;
    rs.levels = std::move(levels);
    rs.step = step;
    if (expected >= 0) {
      rs.complete = found == expected;
    } else {
      rs.complete = std::abs(found - l * k_max / kPi) <= system.channel_count() + 1.0;
    }
    if (rs.complete || system.is_three_star()) break;
    step *= 0.5;
  }
  return rs;
}

}  // namespace qgraph
