#include "qgraph/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/math/tools/minima.hpp>

namespace qgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinEdge = 0.05;
constexpr int kBentWireEdges = 2;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Drawing {
  std::vector<Vec2> pos;
  std::vector<std::pair<int, int>> adj;
  std::vector<double> pot;

  int add(Vec2 p) {
    pos.push_back(p);
    return static_cast<int>(pos.size()) - 1;
  }
  void link(int a, int b) { adj.emplace_back(a, b); }
};

Vec2 step(Vec2 from, double len, double angle) {
  return {from.x + len * std::cos(angle), from.y + len * std::sin(angle)};
}

class Sampler {
 public:
  explicit Sampler(std::mt19937_64& rng) : rng_(rng) {}
  double length() { return 1.0 - (1.0 - kMinEdge) * uniform01(rng_); }  // (0.05, 1]
  double angle() { return kTwoPi * uniform01(rng_); }
  double uniform(double a, double b) { return a + (b - a) * uniform01(rng_); }
  Vec2 prong(Drawing& d, int at) {
    const Vec2 p = step(d.pos[static_cast<std::size_t>(at)], length(), angle());
    const int v = d.add(p);
    d.link(at, v);
    return p;
  }
  /// Triangle hanging at `at`: two sampled sides from the junction, closed by
  /// the third. Returns the two new corner ids.
  std::pair<int, int> triangle(Drawing& d, int at) {
    const Vec2 z = d.pos[static_cast<std::size_t>(at)];
    const int p = d.add(step(z, length(), angle()));
    const int q = d.add(step(z, length(), angle()));
    d.link(at, p);
    d.link(p, q);
    d.link(q, at);
    return {p, q};
  }

 private:
  std::mt19937_64& rng_;
};

/// Moves the `edge_index`-th link end that sits on `v` to a fresh vertex at the
/// same location (splits a vertex without moving anything).
void split(Drawing& d, int v, std::size_t edge_index) {
  const int fresh = d.add(d.pos[static_cast<std::size_t>(v)]);
  auto& e = d.adj[edge_index];
  if (e.first == v) {
    e.first = fresh;
  } else if (e.second == v) {
    e.second = fresh;
  } else {
    throw std::logic_error("split: edge does not touch the vertex");
  }
}

std::size_t find_link(const Drawing& d, int a, int b) {
  for (std::size_t i = 0; i < d.adj.size(); ++i) {
    const auto& e = d.adj[i];
    if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return i;
  }
  throw std::logic_error("find_link: no such edge");
}

/// Barbell skeleton: bells at z1 (corners p1, q1) and z2 (p2, q2) joined by a bar.
struct Barbell {
  int z1, p1, q1, z2, p2, q2;
};

Barbell barbell(Drawing& d, Sampler& s, int root) {
  Barbell b{};
  b.z1 = root;
  b.z2 = d.add(step({0.0, 0.0}, s.length(), s.angle()));
  d.link(b.z1, b.z2);
  std::tie(b.p1, b.q1) = s.triangle(d, b.z1);
  std::tie(b.p2, b.q2) = s.triangle(d, b.z2);
  return b;
}

Drawing draw(TopologyClass c, Sampler& s, const EnsembleOptions& o) {
  Drawing d;
  const int root = d.add({0.0, 0.0});
  switch (c) {
    case TopologyClass::wire:
      s.prong(d, root);
      break;
    case TopologyClass::bent_wire: {
      int at = root;
      for (int i = 0; i < kBentWireEdges; ++i) {
        s.prong(d, at);
        at = static_cast<int>(d.pos.size()) - 1;
      }
      break;
    }
    case TopologyClass::loop:
      s.triangle(d, root);
      break;
    case TopologyClass::star3:
    case TopologyClass::star4:
    case TopologyClass::star5:
    case TopologyClass::star6:
    case TopologyClass::star7: {
      const int n = 3 + static_cast<int>(c) - static_cast<int>(TopologyClass::star3);
      for (int i = 0; i < n; ++i) s.prong(d, root);
      break;
    }
    case TopologyClass::lollipop:
      s.prong(d, root);
      s.triangle(d, root);
      break;
    case TopologyClass::bull: {
      const auto [p, q] = s.triangle(d, root);
      s.prong(d, root);
      s.prong(d, p);
      (void)q;
      break;
    }
    case TopologyClass::lollipop_bull:
      s.triangle(d, root);
      s.prong(d, root);
      s.prong(d, root);
      break;
    case TopologyClass::open_lollipop: {
      s.prong(d, root);
      const auto [p, q] = s.triangle(d, root);
      split(d, q, find_link(d, q, root));
      (void)p;
      break;
    }
    case TopologyClass::wire_lollipop: {
      s.prong(d, root);
      const auto [p, q] = s.triangle(d, root);
      split(d, root, find_link(d, q, root));
      (void)p;
      break;
    }
    case TopologyClass::barbell_loop:
    case TopologyClass::barbell_line:
    case TopologyClass::barbell_star_loop:
    case TopologyClass::barbell_fork_lollipop:
    case TopologyClass::barbell_dual_fork: {
      const Barbell b = barbell(d, s, root);
      if (c == TopologyClass::barbell_line) {
        split(d, b.z1, find_link(d, b.q1, b.z1));
        split(d, b.z2, find_link(d, b.q2, b.z2));
      } else if (c == TopologyClass::barbell_star_loop) {
        split(d, b.z2, find_link(d, b.q2, b.z2));
      } else if (c == TopologyClass::barbell_fork_lollipop) {
        split(d, b.q2, find_link(d, b.q2, b.z2));
      } else if (c == TopologyClass::barbell_dual_fork) {
        split(d, b.q1, find_link(d, b.q1, b.z1));
        split(d, b.q2, find_link(d, b.q2, b.z2));
      }
      break;
    }
    case TopologyClass::star_star: {
      const int b = d.add(step({0.0, 0.0}, s.length(), s.angle()));
      d.link(root, b);
      s.prong(d, root);
      s.prong(d, root);
      s.prong(d, b);
      s.prong(d, b);
      break;
    }
    case TopologyClass::pop_star: {
      const int b = d.add(step({0.0, 0.0}, s.length(), s.angle()));
      d.link(root, b);
      s.prong(d, root);
      s.prong(d, root);
      s.triangle(d, b);
      break;
    }
    case TopologyClass::bubble: {
      // A = root, B placed by a virtual segment; each path bends at a sampled corner
      const int b = d.add(step({0.0, 0.0}, s.length(), s.angle()));
      for (int i = 0; i < 2; ++i) {
        const int m = d.add(step({0.0, 0.0}, s.length(), s.angle()));
        d.link(root, m);
        d.link(m, b);
      }
      s.prong(d, root);
      s.prong(d, root);
      s.prong(d, b);
      s.prong(d, b);
      break;
    }
    case TopologyClass::delta_wire: {
      const double theta = s.angle();
      const double s0 = s.uniform(kMinEdge, 1.0 - kMinEdge);
      const double g = s.uniform(o.g_min, o.g_max);
      const int mid = d.add(step({0.0, 0.0}, s0, theta));
      const int end = d.add(step({0.0, 0.0}, 1.0, theta));
      d.link(root, mid);
      d.link(mid, end);
      d.pot = {0.0, g, 0.0};  // total length is 1, so g / L = g
      break;
    }
    case TopologyClass::custom:
      throw std::invalid_argument("the custom class has no sampling law");
  }
  return d;
}

double edge_length(const Drawing& d, std::size_t i) {
  const Vec2 a = d.pos[static_cast<std::size_t>(d.adj[i].first)];
  const Vec2 b = d.pos[static_cast<std::size_t>(d.adj[i].second)];
  return std::hypot(b.x - a.x, b.y - a.y);
}

/// Scales the drawing so that its longest edge is 1; false when an edge ends
/// up shorter than the floor.
bool normalize_drawing(Drawing& d) {
  double longest = 0.0;
  for (std::size_t i = 0; i < d.adj.size(); ++i) longest = std::max(longest, edge_length(d, i));
  if (!(longest > 0.0)) return false;
  for (auto& p : d.pos) {
    p.x /= longest;
    p.y /= longest;
  }
  for (std::size_t i = 0; i < d.adj.size(); ++i) {
    if (edge_length(d, i) < kMinEdge * (1.0 - 1e-12)) return false;
  }
  return true;
}

GraphSpec jittered(const GraphSpec& g, std::mt19937_64& rng) {
  auto pos = g.positions();
  double longest = 0.0;
  for (const auto& e : g.edges()) longest = std::max(longest, e.length);
  for (auto& p : pos) {
    p.x += 1e-9 * longest * (2.0 * uniform01(rng) - 1.0);
    p.y += 1e-9 * longest * (2.0 * uniform01(rng) - 1.0);
  }
  return build_graph(pos, g.adjacency(), g.topology_class(), g.potentials());
}

void fill_record(EnsembleRecord& rec, const GraphSpec& g, int states) {
  SpectralOptions so;
  so.states = states;
  const auto sol = solve_states(g, so);
  const auto t = transition_moments(g, sol);
  rec.tensors = compute_tensors(t, states);
  rec.three = three_level(t, rec.tensors.beta_best.angle);
  rec.sum_rule = truncated_sum_rule(t, 0, 0, rec.tensors.states, Channel2D::combined);
  rec.wavenumbers.clear();
  for (std::size_t i = 0; i < sol.states.size() && i < 10; ++i) {
    const auto& st = sol.states[i];
    rec.wavenumbers.push_back(st.bound ? -st.k : st.k);  // bound states carry -kappa
  }
  const auto v = rec.tensors.csv_values();
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    throw std::runtime_error("non-finite tensor component");
  }
}

void describe(EnsembleRecord& rec, const GraphSpec& g) {
  rec.positions = g.positions();
  rec.potentials = g.potentials();
  rec.edge_lengths.clear();
  rec.edge_angles.clear();
  for (const auto& e : g.edges()) {
    rec.edge_lengths.push_back(e.length);
    rec.edge_angles.push_back(e.angle);
  }
}

EnsembleRecord solve_with_retry(const GraphSpec& g, int states, std::int64_t id, std::mt19937_64& rng) {
  EnsembleRecord rec;
  rec.id = id;
  describe(rec, g);
  try {
    fill_record(rec, g, states);
    rec.ok = true;
    return rec;
  } catch (const std::exception& first) {
    rec.error = first.what();
  }
  try {
    const GraphSpec j = jittered(g, rng);
    describe(rec, j);
    fill_record(rec, j, states);
    rec.ok = true;
    rec.error.clear();
  } catch (const std::exception& second) {
    rec.ok = false;
    rec.error += std::string("; after jitter: ") + second.what();
  }
  return rec;
}

/// Coordinate-wise Brent refinement of a maximum over several angles.
template <class F>
double refine_angles(F f, std::vector<double>& x, double half_width, int sweeps) {
  double best = f(x);
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto neg = [&](double a) {
        auto y = x;
        y[i] = a;
        return -f(y);
      };
      const auto r = boost::math::tools::brent_find_minima(neg, x[i] - half_width, x[i] + half_width, 30);
      if (-r.second > best) {
        best = -r.second;
        x[i] = r.first;
      }
    }
    half_width *= 0.5;
  }
  return best;
}

double best_beta(const FixedMetric& fm, const std::vector<double>& lengths, const std::vector<double>& angles, int k) {
  const auto t = fm.table(star_graph(lengths, angles));
  return optimal_orientation(beta_tensor(t, t.whole_multiplets(k)), 256).value;
}

}  // namespace

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t id) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= id * 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GraphSpec sample_graph(TopologyClass c, std::mt19937_64& rng, const EnsembleOptions& options) {
  Sampler s(rng);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Drawing d = draw(c, s, options);
    // the point-potential wire is drawn at unit total length already
    if (c != TopologyClass::delta_wire && !normalize_drawing(d)) continue;
    return build_graph(d.pos, d.adj, c, d.pot);
  }
  throw std::runtime_error("sample_graph: no admissible geometry after 10000 draws");
}

EnsembleRecord solve_record(const GraphSpec& g, int states, std::int64_t id) {
  auto rng = sample_rng(0x6a09e667f3bcc909ULL, static_cast<std::uint64_t>(id));
  return solve_with_retry(g, states, id, rng);
}

std::vector<EnsembleRecord> sample_topology(TopologyClass c, const EnsembleOptions& options,
                                            const std::function<void(int)>& progress) {
  if (options.samples < 0) throw std::invalid_argument("samples must be non-negative");
  if (options.states < 3) throw std::invalid_argument("states must be at least 3");
  std::vector<EnsembleRecord> out(static_cast<std::size_t>(options.samples));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int id = next++; id < options.samples; id = next++) {
      auto rng = sample_rng(options.seed, static_cast<std::uint64_t>(id));
      EnsembleRecord rec;
      try {
        const GraphSpec g = sample_graph(c, rng, options);
        rec = solve_with_retry(g, options.states, id, rng);
      } catch (const std::exception& e) {
        rec.id = id;
        rec.ok = false;
        rec.error = e.what();
      }
      out[static_cast<std::size_t>(id)] = std::move(rec);
      if (progress) progress(id);
    }
  };
  const int n = std::max(1, options.threads);
  if (n == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return out;
}

// --- summary -------------------------------------------------------------------------

EnsembleSummary summarize(TopologyClass c, const std::vector<EnsembleRecord>& records) {
  EnsembleSummary s;
  s.topology = c;
  s.samples = static_cast<int>(records.size());
  bool first = true;
  for (const auto& r : records) {
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    if (!r.tensors.converged) ++s.unconverged;
    const auto& t = r.tensors;
    if (first || t.beta_best.value > s.max_beta_xxx) {
      s.max_beta_xxx = t.beta_best.value;
      s.argmax_id = r.id;
      s.argmax_positions = r.positions;
      s.argmax_three = r.three;
      s.argmax_beta_norm = t.beta_norm;
    }
    if (first) {
      s.max_beta_norm = t.beta_norm;
      s.gamma_min = t.gamma_worst.value;
      s.gamma_max = t.gamma_best.value;
    } else {
      s.max_beta_norm = std::max(s.max_beta_norm, t.beta_norm);
      s.gamma_min = std::min(s.gamma_min, t.gamma_worst.value);
      s.gamma_max = std::max(s.gamma_max, t.gamma_best.value);
    }
    first = false;
  }
  return s;
}

nlohmann::json EnsembleSummary::to_json() const {
  nlohmann::json j;
  j["class"] = std::string(qgraph::to_string(topology));
  j["samples"] = samples;
  j["failed"] = failed;
  j["unconverged"] = unconverged;
  j["failure_rate"] = failure_rate();
  j["max_beta_xxx"] = max_beta_xxx;
  j["max_beta_norm"] = max_beta_norm;
  j["gamma_min"] = gamma_min;
  j["gamma_max"] = gamma_max;
  j["argmax_id"] = argmax_id;
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& p : argmax_positions) pos.push_back({p.x, p.y});
  j["argmax_positions"] = pos;
  j["argmax_beta_norm"] = argmax_beta_norm;
  j["argmax_three_level"] = {{"e_ratio", argmax_three.e_ratio},
                             {"x_ratio", argmax_three.x_ratio},
                             {"beta_3l", argmax_three.beta_3l},
                             {"extreme", argmax_three.extreme}};
  return j;
}

EnsembleSummary EnsembleSummary::from_json(const nlohmann::json& j) {
  EnsembleSummary s;
  const auto name = j.at("class").get<std::string>();
  const auto c = topology_from_string(name);
  if (!c) throw std::invalid_argument("summary: unknown class '" + name + "'");
  s.topology = *c;
  s.samples = j.at("samples").get<int>();
  s.failed = j.at("failed").get<int>();
  s.unconverged = j.value("unconverged", 0);
  s.max_beta_xxx = j.at("max_beta_xxx").get<double>();
  s.max_beta_norm = j.at("max_beta_norm").get<double>();
  s.gamma_min = j.at("gamma_min").get<double>();
  s.gamma_max = j.at("gamma_max").get<double>();
  s.argmax_id = j.at("argmax_id").get<std::int64_t>();
  for (const auto& p : j.value("argmax_positions", nlohmann::json::array())) {
    s.argmax_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  s.argmax_beta_norm = j.value("argmax_beta_norm", 0.0);
  if (j.contains("argmax_three_level")) {
    const auto& t = j["argmax_three_level"];
    s.argmax_three.e_ratio = t.value("e_ratio", 0.0);
    s.argmax_three.x_ratio = t.value("x_ratio", 0.0);
    s.argmax_three.beta_3l = t.value("beta_3l", 0.0);
    s.argmax_three.extreme = t.value("extreme", 0.0);
  }
  return s;
}

// --- fixed metric --------------------------------------------------------------------

FixedMetric::FixedMetric(const GraphSpec& g, int states) {
  SpectralOptions so;
  so.states = states;
  states_ = solve_states(g, so);
  const auto n = static_cast<Eigen::Index>(states_.states.size());
  energies_.resize(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    energies_(p) = states_.states[static_cast<std::size_t>(p)].energy;
    multiplet_.push_back(states_.states[static_cast<std::size_t>(p)].multiplet);
  }
  for (const auto& e : g.edges()) {
    Eigen::MatrixXd o(n, n);
    Eigen::MatrixXd f(n, n);
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p; q < n; ++q) {
        const auto ig = edge_integrals(states_.states[static_cast<std::size_t>(p)],
                                       states_.states[static_cast<std::size_t>(q)], e);
        o(p, q) = o(q, p) = ig.overlap;
        f(p, q) = f(q, p) = ig.first;
      }
    }
    overlap_.push_back(std::move(o));
    first_.push_back(std::move(f));
  }
}

MomentTable FixedMetric::table(const GraphSpec& drawing) const {
  if (drawing.edge_count() != overlap_.size()) throw std::invalid_argument("drawing has a different edge count");
  const auto n = energies_.size();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : drawing.edges()) {
    const auto i = static_cast<std::size_t>(e.id);
    x += e.origin_offset.x * overlap_[i] + std::cos(e.angle) * first_[i];
    y += e.origin_offset.y * overlap_[i] + std::sin(e.angle) * first_[i];
  }
  return MomentTable(std::move(x), std::move(y), energies_, multiplet_);
}

GraphSpec star_graph(const std::vector<double>& lengths, const std::vector<double>& angles) {
  if (lengths.size() != angles.size() || lengths.size() < 2) {
    throw std::invalid_argument("star_graph needs matching length and angle lists");
  }
  std::vector<Vec2> pos{{0.0, 0.0}};
  std::vector<std::pair<int, int>> adj;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    pos.push_back(step({0.0, 0.0}, lengths[i], angles[i]));
    adj.emplace_back(0, static_cast<int>(i) + 1);
  }
  return build_graph(pos, adj);
}

// --- scans ---------------------------------------------------------------------------

std::vector<ProngCell> prong_scan_3star(const std::vector<double>& middle, const std::vector<double>& shortest,
                                        int states, int angle_steps) {
  std::vector<ProngCell> out;
  const int n = std::max(angle_steps, 4);
  for (double m : middle) {
    for (double s : shortest) {
      ProngCell cell;
      cell.middle = m;
      cell.shortest = s;
      const std::vector<double> lengths{1.0, m, s};
      const FixedMetric fm(star_graph(lengths, {0.0, 2.0, 4.0}), states);
      auto f = [&](const std::vector<double>& a) { return best_beta(fm, lengths, {0.0, a[0], a[1]}, states); };
      std::vector<double> best{0.0, 0.0};
      double bv = -1.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::vector<double> a{kTwoPi * (i + 0.5) / n, kTwoPi * (j + 0.5) / n};
          const double v = f(a);
          if (v > bv) {
            bv = v;
            best = a;
          }
        }
      }
      cell.beta = refine_angles(f, best, kTwoPi / n, 4);
      cell.angles = {0.0, std::fmod(best[0] + 2 * kTwoPi, kTwoPi), std::fmod(best[1] + 2 * kTwoPi, kTwoPi)};
      out.push_back(std::move(cell));
    }
  }
  return out;
}

std::vector<AnglePoint> angle_scan(const std::vector<double>& lengths, const std::vector<double>& swept, int states,
                                   int samples, std::uint64_t seed) {
  if (lengths.size() < 3) throw std::invalid_argument("angle_scan needs a star with at least three prongs");
  std::vector<double> init(lengths.size());
  for (std::size_t i = 0; i < init.size(); ++i) init[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(init.size());
  const FixedMetric fm(star_graph(lengths, init), states);
  const std::size_t free = lengths.size() - 2;
  std::vector<AnglePoint> out;
  for (std::size_t si = 0; si < swept.size(); ++si) {
    const double theta = swept[si];
    auto f = [&](const std::vector<double>& a) {
      std::vector<double> ang{0.0, theta};
      ang.insert(ang.end(), a.begin(), a.end());
      return best_beta(fm, lengths, ang, states);
    };
    std::vector<double> best(free, 0.0);
    double bv = -1.0;
    if (free == 1) {
      for (int i = 0; i < samples; ++i) {
        const std::vector<double> a{kTwoPi * (i + 0.5) / samples};
        const double v = f(a);
        if (v > bv) {
          bv = v;
          best = a;
        }
      }
      bv = refine_angles(f, best, kTwoPi / samples, 3);
    } else {
      auto rng = sample_rng(seed, si);
      for (int i = 0; i < samples; ++i) {
        std::vector<double> a(free);
        for (auto& x : a) x = kTwoPi * uniform01(rng);
        const double v = f(a);
        if (v > bv) {
          bv = v;
          best = a;
        }
      }
      bv = refine_angles(f, best, 0.3, 3);
    }
    out.push_back({theta, bv});
  }
  return out;
}

std::vector<SpectrumTrace> spectrum_vs_beta(const std::vector<EnsembleRecord>& records) {
  std::vector<SpectrumTrace> out;
  for (const auto& r : records) {
    if (r.ok) out.push_back({r.id, r.tensors.beta_best.value, r.wavenumbers});
  }
  std::stable_sort(out.begin(), out.end(), [](const SpectrumTrace& a, const SpectrumTrace& b) {
    return a.beta < b.beta || (a.beta == b.beta && a.id < b.id);
  });
  return out;
}

DeltaPoint delta_wire_point(double length, double g, double s0, int states) {
  if (!(length > 0.0)) throw std::invalid_argument("delta wire length must be positive");
  if (!(s0 > 0.0 && s0 < length)) throw std::invalid_argument("delta position must lie strictly inside the wire");
  DeltaPoint p;
  p.g = g;
  p.s0 = s0;
  try {
    const GraphSpec wire = build_graph({{0.0, 0.0}, {s0, 0.0}, {length, 0.0}}, {{0, 1}, {1, 2}}, std::nullopt,
                                       {0.0, g / length, 0.0});
    SpectralOptions so;
    so.states = std::max(states, 7);
    const auto t = transition_moments(wire, solve_states(wire, so));
    const double b = beta_tensor(t, t.whole_multiplets(states)).xxx;
    // the mirror image flips the sign, so the best orientation is along +x or -x
    p.beta = std::abs(b);
    const auto d = three_level(t, b >= 0.0 ? 0.0 : std::numbers::pi);
    p.beta_3l = d.beta_3l;
    p.extreme = d.extreme;
    p.e_ratio = d.e_ratio;
    p.x_ratio = d.x_ratio;
    for (int k = 3; k <= 7; ++k) p.sum_rule.push_back(truncated_sum_rule(t, 0, 0, k, Channel2D::x));
    p.ok = std::isfinite(p.beta);
  } catch (const std::exception&) {
    p.ok = false;
  }
  return p;
}

std::vector<DeltaPoint> delta_wire_scan(double length, const std::vector<double>& g, const std::vector<double>& s0,
                                        int states) {
  std::vector<DeltaPoint> out;
  out.reserve(g.size() * s0.size());
  for (double gi : g) {
    for (double si : s0) out.push_back(delta_wire_point(length, gi, si, states));
  }
  return out;
}

}  // namespace qgraph
