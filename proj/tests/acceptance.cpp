// Acceptance suite: one PASS/FAIL line per criterion, measured values shown.
// QGRAPH_ACCEPT_SAMPLES overrides the ensemble size (default 10000).

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "oracles.hpp"
#include "qgraph/secular.hpp"

using namespace qgraph;
using std::numbers::pi;

namespace {

std::map<int, std::string> verdicts;

void verdict(int id, bool ok, const std::string& what) {
  char line[512];
  std::snprintf(line, sizeof line, "%s  %d  %s", ok ? "PASS" : "FAIL", id, what.c_str());
  std::printf("%s\n", line);
  std::fflush(stdout);
  verdicts[id] = line;
}

void detail(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void detail(const char* fmt, ...) {
  std::printf("      ");
  va_list ap;
  va_start(ap, fmt);
  std::vprintf(fmt, ap);
  va_end(ap);
  std::printf("\n");
  std::fflush(stdout);
}

struct ClassRun {
  EnsembleSummary summary;
  double seconds = 0.0;
  double worst_beta_bound = 0.0;  ///< max |beta_xxx(phi)| over records
  double worst_gamma = 0.0;       ///< min gamma_xxxx(theta) over records
};

std::map<TopologyClass, ClassRun> runs;

int sample_count() {
  if (const char* s = std::getenv("QGRAPH_ACCEPT_SAMPLES")) return std::max(10, std::atoi(s));
  return 10000;
}

void run_ensembles() {
  EnsembleOptions o;
  o.samples = sample_count();
  o.seed = 1;
  o.states = 30;
  o.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  for (const auto c : all_topology_classes()) {
    if (c == TopologyClass::custom) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const auto recs = sample_topology(c, o);
    ClassRun r;
    r.summary = summarize(c, recs);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool first = true;
    for (const auto& rec : recs) {
      if (!rec.ok) continue;
      // beta(phi + pi) = -beta(phi), so the best axis also bounds |beta|
      const double b = std::abs(rec.tensors.beta_best.value);
      r.worst_beta_bound = first ? b : std::max(r.worst_beta_bound, b);
      r.worst_gamma = first ? rec.tensors.gamma_worst.value : std::min(r.worst_gamma, rec.tensors.gamma_worst.value);
      first = false;
    }
    detail("%-24s n=%d failed=%d unconverged=%d max|beta|=%.4f norm=%.4f gamma=[%.4f, %.4f]  %.1fs",
           std::string(to_string(c)).c_str(), r.summary.samples, r.summary.failed, r.summary.unconverged,
           r.summary.max_beta_xxx, r.summary.max_beta_norm, r.summary.gamma_min, r.summary.gamma_max, r.seconds);
    runs[c] = r;
  }
}

// 1 -------------------------------------------------------------------------
void results_table() {
  struct Row {
    TopologyClass c;
    double beta;
  };
  const std::vector<Row> table{
      {TopologyClass::bent_wire, 0.172},         {TopologyClass::loop, 0.049},
      {TopologyClass::star3, 0.58},              {TopologyClass::star4, 0.53},
      {TopologyClass::star5, 0.51},              {TopologyClass::star6, 0.51},
      {TopologyClass::star7, 0.51},              {TopologyClass::lollipop, 0.62},
      {TopologyClass::bull, 0.53},               {TopologyClass::open_lollipop, 0.33},
      {TopologyClass::wire_lollipop, 0.17},      {TopologyClass::barbell_fork_lollipop, 0.54},
      {TopologyClass::barbell_dual_fork, 0.43},  {TopologyClass::barbell_star_loop, 0.41},
      {TopologyClass::barbell_line, 0.14},       {TopologyClass::barbell_loop, 0.11},
  };
  std::string off;
  for (const auto& row : table) {
    const double got = runs[row.c].summary.max_beta_xxx;
    const bool ok = std::abs(got - row.beta) <= 0.02;
    detail("%-24s %.4f  target %.3f  %s", std::string(to_string(row.c)).c_str(), got, row.beta, ok ? "ok" : "off");
    if (!ok) off += " " + std::string(to_string(row.c));
  }
  const double tri_norm = runs[TopologyClass::loop].summary.argmax_beta_norm;
  const bool norm_ok = std::abs(tri_norm - 0.086) <= 0.02;
  detail("triangle norm at argmax %.4f  target 0.086  %s", tri_norm, norm_ok ? "ok" : "off");
  if (!norm_ok) off += " triangle-norm";
  verdict(1, off.empty(), "results table max |beta_xxx| within 0.02" + (off.empty() ? "" : " (off:" + off + ")"));
}

// 2 -------------------------------------------------------------------------
void gamma_ranges() {
  struct Row {
    TopologyClass c;
    double lo, hi;
  };
  const std::vector<Row> table{{TopologyClass::star3, -0.138, 0.30},
                               {TopologyClass::bent_wire, -0.126, 0.007},
                               {TopologyClass::lollipop, -0.12, 0.20},
                               {TopologyClass::barbell_loop, -0.1, 0.002}};
  std::string off;
  for (const auto& row : table) {
    const auto& s = runs[row.c].summary;
    const bool ok = std::abs(s.gamma_min - row.lo) <= 0.03 && std::abs(s.gamma_max - row.hi) <= 0.03;
    detail("%-24s [%.4f, %.4f]  target [%.3f, %.3f]  %s", std::string(to_string(row.c)).c_str(), s.gamma_min,
           s.gamma_max, row.lo, row.hi, ok ? "ok" : "off");
    if (!ok) off += " " + std::string(to_string(row.c));
  }
  verdict(2, off.empty(), "gamma_xxxx ranges within 0.03" + (off.empty() ? "" : " (off:" + off + ")"));
}

// 3 -------------------------------------------------------------------------
void delta_wire() {
  // coarse grid over coupling sign and position, then coordinate refinement
  DeltaPoint best;
  for (int i = 0; i <= 80; ++i) {
    const double g = -20.0 + 0.5 * i;
    for (int j = 1; j < 50; ++j) {
      const auto p = delta_wire_point(1.0, g, 0.02 * j, 30);
      if (p.ok && p.beta > best.beta) best = p;
    }
  }
  double g = best.g;
  double s0 = best.s0;
  double hg = 0.5;
  double hs = 0.02;
  for (int sweep = 0; sweep < 6; ++sweep) {
    auto by_g = [&](double x) { return -delta_wire_point(1.0, x, s0, 30).beta; };
    g = boost::math::tools::brent_find_minima(by_g, g - hg, g + hg, 40).first;
    auto by_s = [&](double x) { return -delta_wire_point(1.0, g, x, 30).beta; };
    s0 = boost::math::tools::brent_find_minima(by_s, std::max(1e-3, s0 - hs), std::min(1 - 1e-3, s0 + hs), 40).first;
    hg *= 0.5;
    hs *= 0.5;
  }
  best = delta_wire_point(1.0, g, s0, 30);
  const double excess = best.extreme / best.beta - 1.0;
  int reach = -1;
  for (std::size_t k = 0; k < best.sum_rule.size(); ++k) {
    if (std::abs(best.sum_rule[k] - 1.0) <= 0.02) {
      reach = static_cast<int>(k) + 3;
      break;
    }
  }
  detail("max full beta %.4f at g = %.3f, s0 = %.4f (target 0.705 +- 0.005)", best.beta, g, s0);
  detail("E = %.4f, X = %.4f, three-level %.4f, extreme %.4f (excess %.1f%%, target 15-25%%)", best.e_ratio,
         best.x_ratio, best.beta_3l, best.extreme, 100 * excess);
  detail("S00(K=3..7) = %.4f %.4f %.4f %.4f %.4f; first K within 2%%: %d", best.sum_rule[0], best.sum_rule[1],
         best.sum_rule[2], best.sum_rule[3], best.sum_rule[4], reach);
  const bool beta_ok = std::abs(best.beta - 0.705) <= 0.005;
  const bool excess_ok = excess >= 0.15 && excess <= 0.25;
  const bool sum_ok = reach >= 4;
  std::string off;
  if (!beta_ok) off += " max-beta";
  if (!excess_ok) off += " extreme-excess";
  if (!sum_ok) off += " sum-rule";
  verdict(3, off.empty(), "point-potential wire maximum" + (off.empty() ? "" : " (off:" + off + ")"));
}

// 4 -------------------------------------------------------------------------
void extreme_surface() {
  const double v = extreme_f(0.0) * extreme_g(0.79);
  bool mono = true;
  for (int i = 0; i < 1000; ++i) mono = mono && extreme_f((i + 1) / 1000.0) < extreme_f(i / 1000.0);
  const bool zeros = extreme_g(0.0) == 0.0 && std::abs(extreme_g(1.0)) < 1e-15 && std::abs(extreme_g(-1.0)) < 1e-15;
  const double xpeak = std::pow(3.0, -0.25);
  detail("f(0) G(0.79) = %.6f (target 1 +- 0.001); G peaks at X = %.4f with value %.6f", v, xpeak,
         extreme_g(xpeak));
  detail("f monotone decreasing on [0,1]: %s; G(0) = G(1) = G(-1) = 0: %s", mono ? "yes" : "no", zeros ? "yes" : "no");
  const bool ok = std::abs(v - 1.0) <= 1e-3 && mono && zeros;
  verdict(4, ok, "extreme three-level surface" + std::string(std::abs(v - 1.0) <= 1e-3 ? "" : " (off: G(0.79))"));
}

// 5 -------------------------------------------------------------------------
void spectral_oracle() {
  std::mt19937_64 rng(5);
  double worst_k = 0.0;
  double worst_x = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_graph(rng, 8);
    const auto sol = solve_states(g, {.states = 15});
    const auto t = transition_moments(g, sol);
    const auto fd = oracle::fd_extrapolated(g, g.total_length() / 400.0, static_cast<int>(sol.states.size()));
    for (int n = 0; n < 15; ++n) {
      const double k = sol.states[static_cast<std::size_t>(n)].k;
      const double kf = std::sqrt(2.0 * std::max(fd.energies(n), 0.0));
      worst_k = std::max(worst_k, k > 0 ? std::abs(kf - k) / k : kf);
    }
    // compare multiplet blocks by Frobenius norm, which no basis choice inside a multiplet changes
    std::vector<std::pair<int, int>> blocks;
    for (int n = 0; n < 15;) {
      const int m = sol.states[static_cast<std::size_t>(n)].multiplicity;
      blocks.emplace_back(n, std::min(m, 15 - n));
      n += m;
    }
    double scale = 0.0;
    for (int n = 0; n < 15; ++n)
      for (int m = 0; m < 15; ++m) scale = std::max({scale, std::abs(t.x()(n, m)), std::abs(t.y()(n, m))});
    for (const auto& [a, na] : blocks) {
      for (const auto& [b, nb] : blocks) {
        const double ex = t.x().block(a, b, na, nb).norm();
        const double ey = t.y().block(a, b, na, nb).norm();
        const double fx = fd.x.block(a, b, na, nb).norm();
        const double fy = fd.y.block(a, b, na, nb).norm();
        worst_x = std::max({worst_x, std::abs(ex - fx) / scale, std::abs(ey - fy) / scale});
      }
    }
  }
  detail("50 random graphs: worst relative k error %.2e (limit 1e-3), worst moment error %.2e (limit 1e-2)", worst_k,
         worst_x);
  verdict(5, worst_k < 1e-3 && worst_x < 1e-2, "spectrum and moments match the finite-difference oracle");
}

// 6 -------------------------------------------------------------------------
void invariants() {
  std::string off;

  // sum rule at 50 states, every class
  double worst_sum = 0.0;
  std::string worst_class;
  for (const auto c : all_topology_classes()) {
    if (c == TopologyClass::custom) continue;
    for (int id = 0; id < 100; ++id) {
      auto rng = sample_rng(101, static_cast<std::uint64_t>(id));
      const auto g = sample_graph(c, rng);
      const auto t = transition_moments(g, solve_states(g, {.states = 50}));
      const double dev = std::abs(truncated_sum_rule(t, 0, 0, t.whole_multiplets(50), Channel2D::combined) - 1.0);
      if (dev > worst_sum) {
        worst_sum = dev;
        worst_class = std::string(to_string(c));
      }
    }
  }
  detail("sum rule at 50 states: worst |S00 - 1| = %.4f (%s), limit 0.02", worst_sum, worst_class.c_str());
  if (worst_sum > 0.02) off += " sum-rule";

  double beta_bound = 0.0;
  double gamma_floor = 0.0;
  for (const auto& [c, r] : runs) {
    beta_bound = std::max(beta_bound, r.worst_beta_bound);
    gamma_floor = std::min(gamma_floor, r.worst_gamma);
  }
  detail("over all ensembles: max |beta_xxx| = %.4f (limit 1.02), min gamma_xxxx = %.4f (limit -0.27)", beta_bound,
         gamma_floor);
  if (beta_bound > 1.02) off += " beta-bound";
  if (gamma_floor < -0.27) off += " gamma-bound";

  // rotation and origin invariance
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  double rot = 0.0;
  double trans = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(rng, 7);
    const auto a = compute_tensors(transition_moments(g, solve_states(g, {.states = 30})));
    const auto gr = g.rotated(u(rng));
    const auto r = compute_tensors(transition_moments(gr, solve_states(gr, {.states = 30})));
    rot = std::max({rot, std::abs(a.beta_norm - r.beta_norm), std::abs(a.gamma_norm - r.gamma_norm)});
    // list the same drawing from its second vertex so the origin moves
    const auto pos = g.positions();
    const auto n = static_cast<int>(pos.size());
    std::vector<Vec2> p2(pos.size());
    for (int i = 0; i < n; ++i) p2[static_cast<std::size_t>((i + n - 1) % n)] = pos[static_cast<std::size_t>(i)];
    std::vector<std::pair<int, int>> adj;
    for (const auto& [x, y] : g.adjacency()) adj.emplace_back((x + n - 1) % n, (y + n - 1) % n);
    const auto gt = build_graph(p2, adj).translated({u(rng), -u(rng)});
    const auto s = compute_tensors(transition_moments(gt, solve_states(gt, {.states = 30})));
    trans = std::max({trans, std::abs(a.beta.xxx - s.beta.xxx), std::abs(a.beta.xxy - s.beta.xxy),
                      std::abs(a.beta.xyy - s.beta.xyy), std::abs(a.beta.yyy - s.beta.yyy),
                      std::abs(a.gamma.xxxx - s.gamma.xxxx), std::abs(a.gamma.xxxy - s.gamma.xxxy),
                      std::abs(a.gamma.xxyy - s.gamma.xxyy), std::abs(a.gamma.xyyy - s.gamma.xyyy),
                      std::abs(a.gamma.yyyy - s.gamma.yyyy)});
  }
  detail("100 random graphs: rotation changes the norms by %.2e, moving the origin changes components by %.2e "
         "(limit 1e-10)",
         rot, trans);
  if (rot > 1e-10) off += " rotation";
  if (trans > 1e-10) off += " translation";

  // one determinant root per separator cell; the cell below pi/L is empty
  int bad_cells = 0;
  for (int id = 0; id < 10000; ++id) {
    auto rng3 = sample_rng(202, static_cast<std::uint64_t>(id));
    const auto g = sample_graph(TopologyClass::star3, rng3);
    const double len = g.total_length();
    VertexOperator op(g);
    int below = op.count_below_k(pi / len);
    if (below != 0) ++bad_cells;
    for (int n = 2; n <= 21; ++n) {
      const int c = op.count_below_k(n * pi / len);
      if (c - below != 1) ++bad_cells;
      below = c;
    }
  }
  detail("10000 random 3-stars, 20 cells each: %d cells without exactly one level", bad_cells);
  if (bad_cells != 0) off += " root-cells";

  // continuity across rational prong ratios
  double jump = 0.0;
  const std::vector<std::vector<double>> rational{{1.0, 0.5, 0.25}, {1.0, 0.5, 0.3}, {1.0, 2.0 / 3, 1.0 / 3},
                                                  {1.0, 0.6, 0.2},  {1.0, 1.0, 0.5}};
  for (const auto& l : rational) {
    const std::vector<double> ang{0.0, 2.3, 4.1};
    const auto ge = star_graph(l, ang);
    auto ln = l;
    ln[1] += 1e-6;
    const auto gn = star_graph(ln, ang);
    const auto e = compute_tensors(transition_moments(ge, solve_states(ge, {.states = 30})));
    const auto m = compute_tensors(transition_moments(gn, solve_states(gn, {.states = 30})));
    jump = std::max({jump, std::abs(e.beta_best.value - m.beta_best.value), std::abs(e.gamma.xxxx - m.gamma.xxxx),
                     std::abs(e.beta_norm - m.beta_norm)});
  }
  detail("rational 3-stars against a 1e-6 perturbation: largest change %.2e (limit 1e-3)", jump);
  if (jump > 1e-3) off += " continuity";

  verdict(6, off.empty(), "invariant suite" + (off.empty() ? "" : " (off:" + off + ")"));
}

// ensemble order statistics outside the numbered criteria, reported only
void ensemble_properties() {
  double star_low = 1.0;
  std::string star_low_class;
  for (const auto c : {TopologyClass::star3, TopologyClass::star4, TopologyClass::star5, TopologyClass::star6,
                       TopologyClass::star7, TopologyClass::lollipop, TopologyClass::bull, TopologyClass::lollipop_bull,
                       TopologyClass::open_lollipop, TopologyClass::barbell_fork_lollipop,
                       TopologyClass::barbell_dual_fork, TopologyClass::barbell_star_loop, TopologyClass::star_star,
                       TopologyClass::pop_star, TopologyClass::bubble}) {
    if (runs[c].summary.max_beta_xxx < star_low) {
      star_low = runs[c].summary.max_beta_xxx;
      star_low_class = std::string(to_string(c));
    }
  }
  double free_high = 0.0;
  std::string free_high_class;
  for (const auto c : {TopologyClass::bent_wire, TopologyClass::loop, TopologyClass::barbell_line,
                       TopologyClass::barbell_loop}) {
    if (runs[c].summary.max_beta_xxx > free_high) {
      free_high = runs[c].summary.max_beta_xxx;
      free_high_class = std::string(to_string(c));
    }
  }
  detail("info: lowest star-bearing maximum %.4f (%s, want >= 0.33); highest star-free maximum %.4f (%s, want <= 0.18)",
         star_low, star_low_class.c_str(), free_high, free_high_class.c_str());
  const double open = runs[TopologyClass::barbell_dual_fork].summary.max_beta_xxx;
  const double closed = runs[TopologyClass::barbell_loop].summary.max_beta_xxx;
  detail("info: open over closed barbell maximum %.2f (want >= 3)", open / closed);
}

// 7 -------------------------------------------------------------------------
void three_level_at_maxima() {
  std::string off;
  for (const auto c : {TopologyClass::star3, TopologyClass::lollipop}) {
    const double e = runs[c].summary.argmax_three.e_ratio;
    const bool ok = std::abs(e - 0.40) <= 0.03;
    detail("%-10s argmax E = %.4f (target 0.40 +- 0.03)  %s", std::string(to_string(c)).c_str(), e, ok ? "ok" : "off");
    if (!ok) off += " E-" + std::string(to_string(c));
  }
  std::string far;
  for (const auto& [c, r] : runs) {
    const double full = r.summary.max_beta_xxx;
    const double tl = r.summary.argmax_three.beta_3l;
    // the straight wire has no maximum to compare
    if (std::abs(full) < 1e-8) {
      detail("%-24s full beta vanishes, skipped", std::string(to_string(c)).c_str());
      continue;
    }
    const double rel = std::abs(tl - full) / std::abs(full);
    detail("%-24s full %.4f three-level %.4f (%.1f%%)", std::string(to_string(c)).c_str(), full, tl, 100 * rel);
    if (rel > 0.05) far += " " + std::string(to_string(c));
  }
  if (!far.empty()) off += " three-level:" + far;
  verdict(7, off.empty(), "three-level diagnostics at the class maxima" + (off.empty() ? "" : " (off:" + off + ")"));
}

// 8 -------------------------------------------------------------------------
void prong_scan() {
  std::vector<double> middle;
  std::vector<double> shortest;
  for (int i = 0; i < 20; ++i) middle.push_back(0.05 + 0.05 * i);
  for (int i = 0; i < 18; ++i) shortest.push_back(0.01 + 0.02 * i);
  const auto cells = prong_scan_3star(middle, shortest, 30, 24);
  const auto best = *std::max_element(cells.begin(), cells.end(),
                                      [](const ProngCell& a, const ProngCell& b) { return a.beta < b.beta; });
  // angles hold (long, middle, short) with the long prong at 0
  const double mid_dir = std::abs(std::remainder(best.angles[1], 2 * pi));
  detail("peak beta %.4f at middle %.2f, short %.2f; middle prong at %.2f deg, short prong at %.2f deg", best.beta,
         best.middle, best.shortest, mid_dir * 180 / pi,
         std::abs(std::remainder(best.angles[2], 2 * pi)) * 180 / pi);
  const bool place = std::abs(best.middle - 0.6) <= 0.05 && std::abs(best.shortest - 0.13) <= 0.05;
  const bool anti = std::abs(mid_dir - pi) <= 5 * pi / 180;
  verdict(8, place && anti, "prong-scan peak and antiparallel middle prong");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  std::printf("acceptance: %d samples per class\n", sample_count());
  extreme_surface();
  spectral_oracle();
  prong_scan();
  delta_wire();
  run_ensembles();
  results_table();
  gamma_ranges();
  invariants();
  ensemble_properties();
  three_level_at_maxima();
  std::printf("\nsummary\n");
  int failures = 0;
  for (const auto& [id, line] : verdicts) {
    std::printf("%s\n", line.c_str());
    failures += line.rfind("FAIL", 0) == 0;
  }
  std::printf("acceptance: %d of %zu criteria failed, %.0fs\n", failures, verdicts.size(),
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return failures == 0 ? 0 : 1;
}
