#include "qgraph/graph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qgraph {

namespace {

struct ClassName {
  TopologyClass cls;
  std::string_view name;
};

constexpr std::array<ClassName, 23> kClassNames{{
    {TopologyClass::wire, "wire"},
    {TopologyClass::bent_wire, "bent-wire"},
    {TopologyClass::loop, "triangle"},
    {TopologyClass::star3, "3-star"},
    {TopologyClass::star4, "4-star"},
    {TopologyClass::star5, "5-star"},
    {TopologyClass::star6, "6-star"},
    {TopologyClass::star7, "7-star"},
    {TopologyClass::lollipop, "lollipop"},
    {TopologyClass::bull, "bull"},
    {TopologyClass::lollipop_bull, "lollipop-bull"},
    {TopologyClass::open_lollipop, "open-lollipop"},
    {TopologyClass::wire_lollipop, "wire-lollipop"},
    {TopologyClass::barbell_fork_lollipop, "barbell-2fork-lollipop"},
    {TopologyClass::barbell_dual_fork, "barbell-dual-2fork"},
    {TopologyClass::barbell_star_loop, "barbell-star-loop"},
    {TopologyClass::barbell_line, "barbell-line"},
    {TopologyClass::barbell_loop, "barbell-loop"},
    {TopologyClass::star_star, "star-star"},
    {TopologyClass::pop_star, "pop-star"},
    {TopologyClass::bubble, "bubble"},
    {TopologyClass::delta_wire, "delta-wire"},
    {TopologyClass::custom, "custom"},
}};

}  // namespace

std::string_view to_string(TopologyClass c) {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "custom";
}

std::optional<TopologyClass> topology_from_string(std::string_view name) {
  if (name == "loop") return TopologyClass::loop;
  for (const auto& [cls, n] : kClassNames) {
    if (n == name) return cls;
  }
  return std::nullopt;
}

const std::vector<TopologyClass>& all_topology_classes() {
  static const std::vector<TopologyClass> all = [] {
    std::vector<TopologyClass> v;
    for (const auto& entry : kClassNames) v.push_back(entry.cls);
    return v;
  }();
  return all;
}

TopologyClass signature_class(TopologyClass c) {
  switch (c) {
    case TopologyClass::open_lollipop:
      return TopologyClass::star3;
    case TopologyClass::wire_lollipop:
    case TopologyClass::barbell_line:
      return TopologyClass::bent_wire;
    case TopologyClass::barbell_fork_lollipop:
      return TopologyClass::pop_star;
    case TopologyClass::barbell_dual_fork:
      return TopologyClass::star_star;
    case TopologyClass::barbell_star_loop:
      return TopologyClass::lollipop;
    default:
      return c;
  }
}

Vec2 Edge::point_at(double s) const {
  return {origin_offset.x + s * std::cos(angle), origin_offset.y + s * std::sin(angle)};
}

double GraphSpec::total_length() const {
  return std::accumulate(edges_.begin(), edges_.end(), 0.0, [](double acc, const Edge& e) { return acc + e.length; });
}

int GraphSpec::cycle_rank() const {
  return static_cast<int>(edges_.size()) - static_cast<int>(vertices_.size()) + 1;
}

std::size_t GraphSpec::terminal_count() const {
  return static_cast<std::size_t>(
      std::count_if(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.kind == VertexKind::terminal; }));
}

std::size_t GraphSpec::internal_count() const { return vertices_.size() - terminal_count(); }

bool GraphSpec::has_potentials() const {
  return std::any_of(vertices_.begin(), vertices_.end(),
                     [](const Vertex& v) { return v.kind == VertexKind::internal && v.potential != 0.0; });
}

int GraphSpec::boundary_condition_count() const {
  int count = 0;
  for (const auto& v : vertices_) {
    if (v.kind == VertexKind::terminal) {
      count += 1;
    } else {
      count += 1 + (v.degree - 1);
    }
  }
  return count;
}

std::vector<Vec2> GraphSpec::positions() const {
  std::vector<Vec2> p;
  p.reserve(vertices_.size());
  for (const auto& v : vertices_) p.push_back(v.position);
  return p;
}

std::vector<std::pair<int, int>> GraphSpec::adjacency() const {
  std::vector<std::pair<int, int>> adj;
  adj.reserve(edges_.size());
  for (const auto& e : edges_) adj.emplace_back(e.from, e.to);
  return adj;
}

std::vector<double> GraphSpec::potentials() const {
  std::vector<double> p;
  p.reserve(vertices_.size());
  for (const auto& v : vertices_) p.push_back(v.potential);
  return p;
}

GraphSpec GraphSpec::translated(Vec2 shift) const {
  auto pos = positions();
  for (auto& p : pos) {
    p.x += shift.x;
    p.y += shift.y;
  }
  return build_graph(pos, adjacency(), topology_, potentials());
}

GraphSpec GraphSpec::rotated(double alpha) const {
  auto pos = positions();
  const Vec2 o = pos.front();
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  for (auto& p : pos) {
    const double dx = p.x - o.x;
    const double dy = p.y - o.y;
    p = {o.x + c * dx - s * dy, o.y + s * dx + c * dy};
  }
  return build_graph(pos, adjacency(), topology_, potentials());
}

GraphSpec build_graph(const std::vector<Vec2>& positions, const std::vector<std::pair<int, int>>& adjacency,
                      std::optional<TopologyClass> declared, const std::vector<double>& potentials) {
  if (adjacency.empty()) throw std::invalid_argument("graph needs at least one edge");
  if (positions.empty()) throw std::invalid_argument("graph needs vertices");
  if (!potentials.empty() && potentials.size() != positions.size())
    throw std::invalid_argument("potential list must match the vertex count");

  const int nv = static_cast<int>(positions.size());
  GraphSpec g;
  g.vertices_.resize(positions.size());
  g.incidence_.assign(positions.size(), {});
  for (int i = 0; i < nv; ++i) {
    auto& v = g.vertices_[static_cast<std::size_t>(i)];
    v.id = i;
    v.position = positions[static_cast<std::size_t>(i)];
    v.potential = potentials.empty() ? 0.0 : potentials[static_cast<std::size_t>(i)];
  }

  std::set<std::pair<int, int>> seen;
  const Vec2 origin = positions.front();
  for (std::size_t k = 0; k < adjacency.size(); ++k) {
    const auto [u, w] = adjacency[k];
    if (u < 0 || w < 0 || u >= nv || w >= nv) {
      std::ostringstream msg;
      msg << "edge " << k << " references a vertex outside [0, " << nv << ")";
      throw std::invalid_argument(msg.str());
    }
    if (u == w) throw std::invalid_argument("edge " + std::to_string(k) + " is a self loop");
    const auto key = std::minmax(u, w);
    if (!seen.insert(key).second) throw std::invalid_argument("duplicate edge " + std::to_string(k));

    const Vec2 a = positions[static_cast<std::size_t>(u)];
    const Vec2 b = positions[static_cast<std::size_t>(w)];
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    if (!(len > 1e-12)) throw std::invalid_argument("edge " + std::to_string(k) + " has zero length");

    Edge e;
    e.id = static_cast<int>(k);
    e.from = u;
    e.to = w;
    e.length = len;
    e.angle = std::atan2(dy, dx);
    e.origin_offset = {a.x - origin.x, a.y - origin.y};
    g.edges_.push_back(e);
    g.incidence_[static_cast<std::size_t>(u)].push_back(e.id);
    g.incidence_[static_cast<std::size_t>(w)].push_back(e.id);
  }

  // connectivity
  std::vector<int> stack{0};
  std::vector<bool> reached(positions.size(), false);
  reached[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int eid : g.incidence_[static_cast<std::size_t>(v)]) {
      const auto& e = g.edges_[static_cast<std::size_t>(eid)];
      const int o = e.from == v ? e.to : e.from;
      if (!reached[static_cast<std::size_t>(o)]) {
        reached[static_cast<std::size_t>(o)] = true;
        stack.push_back(o);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end())
    throw std::invalid_argument("graph is disconnected");

  bool any_terminal = false;
  for (auto& v : g.vertices_) {
    v.degree = static_cast<int>(g.incidence_[static_cast<std::size_t>(v.id)].size());
    v.kind = v.degree == 1 ? VertexKind::terminal : VertexKind::internal;
    any_terminal = any_terminal || v.kind == VertexKind::terminal;
  }
  g.closed_ = !any_terminal;

  const TopologyClass inferred = classify(g);
  if (declared && *declared != TopologyClass::custom) {
    if (signature_class(*declared) != inferred) {
      throw std::invalid_argument("declared topology '" + std::string(to_string(*declared)) +
                                  "' does not match the adjacency (looks like '" + std::string(to_string(inferred)) +
                                  "')");
    }
    g.topology_ = *declared;
  } else if (declared) {
    g.topology_ = TopologyClass::custom;
  } else {
    g.topology_ = inferred;
  }
  return g;
}

// --- decomposition -----------------------------------------------------------

int MotifInstance::arity(const std::vector<Channel>& all) const {
  return static_cast<int>(std::count_if(channels.begin(), channels.end(), [&](int c) {
    return all[static_cast<std::size_t>(c)].kind != Channel::Kind::loop;
  }));
}

Decomposition motif_decompose(const GraphSpec& g) {
  const auto& verts = g.vertices();
  const auto& edges = g.edges();
  Decomposition d;
  d.motif_of_vertex.assign(verts.size(), -1);
  d.channel_of_vertex.assign(verts.size(), -1);

  auto is_stop = [&](int v) {
    const auto& vx = verts[static_cast<std::size_t>(v)];
    return vx.degree != 2 || vx.potential != 0.0;
  };
  auto is_center = [&](int v) {
    const auto& vx = verts[static_cast<std::size_t>(v)];
    return vx.kind == VertexKind::internal && is_stop(v);
  };

  std::vector<int> stops;
  for (const auto& v : verts) {
    if (is_stop(v.id)) stops.push_back(v.id);
  }

  std::vector<bool> used(edges.size(), false);
  auto walk = [&](int start, int first_edge) {
    Channel ch;
    ch.start = start;
    int v = start;
    int eid = first_edge;
    while (true) {
      used[static_cast<std::size_t>(eid)] = true;
      const auto& e = edges[static_cast<std::size_t>(eid)];
      ch.edges.push_back(eid);
      ch.length += e.length;
      v = e.from == v ? e.to : e.from;
      if (is_stop(v) || v == start) break;
      ch.folded_vertices.push_back(v);
      const auto& inc = g.incident(v);
      eid = inc[0] == eid ? inc[1] : inc[0];
    }
    ch.end = v;
    return ch;
  };

  if (stops.empty()) {
    // pure cycle: every vertex has degree two
    Channel ch = walk(0, g.incident(0)[0]);
    ch.kind = Channel::Kind::closed_cycle;
    ch.folded_vertices.insert(ch.folded_vertices.begin(), 0);
    for (int v : ch.folded_vertices) d.channel_of_vertex[static_cast<std::size_t>(v)] = 0;
    d.channels.push_back(std::move(ch));
    return d;
  }

  for (int s : stops) {
    for (int eid : g.incident(s)) {
      if (used[static_cast<std::size_t>(eid)]) continue;
      Channel ch = walk(s, eid);
      const bool a = is_center(ch.start);
      const bool b = is_center(ch.end);
      if (a && b) {
        ch.kind = ch.start == ch.end ? Channel::Kind::loop : Channel::Kind::coupling;
      } else if (a || b) {
        ch.kind = Channel::Kind::terminal;
        if (!a) {
          // orient terminal channels center -> terminal
          std::swap(ch.start, ch.end);
          std::reverse(ch.edges.begin(), ch.edges.end());
          std::reverse(ch.folded_vertices.begin(), ch.folded_vertices.end());
        }
      } else {
        ch.kind = Channel::Kind::open_path;
      }
      const int idx = static_cast<int>(d.channels.size());
      for (int v : ch.folded_vertices) d.channel_of_vertex[static_cast<std::size_t>(v)] = idx;
      d.channels.push_back(std::move(ch));
    }
  }

  for (int s : stops) {
    if (!is_center(s)) continue;
    MotifInstance m;
    m.center = s;
    m.potential = verts[static_cast<std::size_t>(s)].potential;
    for (std::size_t c = 0; c < d.channels.size(); ++c) {
      const auto& ch = d.channels[c];
      if (ch.start == s || ch.end == s) m.channels.push_back(static_cast<int>(c));
    }
    const bool has_loop = std::any_of(m.channels.begin(), m.channels.end(), [&](int c) {
      return d.channels[static_cast<std::size_t>(c)].kind == Channel::Kind::loop;
    });
    if (has_loop) {
      m.kind = MotifInstance::Kind::lollipop;
    } else if (verts[static_cast<std::size_t>(s)].degree >= 3) {
      m.kind = MotifInstance::Kind::star;
    } else {
      m.kind = MotifInstance::Kind::dressed;
    }
    d.motif_of_vertex[static_cast<std::size_t>(s)] = static_cast<int>(d.motifs.size());
    d.motifs.push_back(std::move(m));
  }
  return d;
}

TopologyClass classify(const GraphSpec& g) {
  const Decomposition d = motif_decompose(g);
  const int cycles = g.cycle_rank();

  int branch = 0;
  std::vector<int> degrees;
  for (const auto& v : g.vertices()) {
    if (v.degree >= 3) {
      ++branch;
      degrees.push_back(v.degree);
    }
  }
  std::sort(degrees.begin(), degrees.end());

  auto loops_at = [&](int center) {
    int n = 0;
    for (const auto& ch : d.channels) {
      if (ch.kind == Channel::Kind::loop && ch.start == center) ++n;
    }
    return n;
  };

  if (branch == 0) {
    if (cycles == 1) return g.has_potentials() ? TopologyClass::custom : TopologyClass::loop;
    if (g.has_potentials()) return TopologyClass::delta_wire;
    return g.edge_count() == 1 ? TopologyClass::wire : TopologyClass::bent_wire;
  }
  if (g.has_potentials()) return TopologyClass::custom;

  std::vector<int> centers;
  for (const auto& m : d.motifs) centers.push_back(m.center);

  if (branch == 1) {
    const int deg = degrees.front();
    if (cycles == 0 && deg >= 3 && deg <= 7) {
      return static_cast<TopologyClass>(static_cast<int>(TopologyClass::star3) + deg - 3);
    }
    if (cycles == 1 && loops_at(centers.front()) == 1) {
      if (deg == 3) return TopologyClass::lollipop;
      if (deg == 4) return TopologyClass::lollipop_bull;
    }
    return TopologyClass::custom;
  }

  if (branch == 2) {
    const int l0 = loops_at(centers[0]);
    const int l1 = loops_at(centers[1]);
    int coupling = 0;
    for (const auto& ch : d.channels) {
      if (ch.kind == Channel::Kind::coupling) ++coupling;
    }
    if (degrees == std::vector<int>{3, 3}) {
      if (cycles == 0) return TopologyClass::star_star;
      if (cycles == 1 && l0 + l1 == 1) return TopologyClass::pop_star;
      if (cycles == 1 && l0 + l1 == 0 && coupling == 2) return TopologyClass::bull;
      if (cycles == 2 && l0 == 1 && l1 == 1) return TopologyClass::barbell_loop;
    }
    if (degrees == std::vector<int>{4, 4} && cycles == 1 && coupling == 2 && l0 + l1 == 0) {
      return TopologyClass::bubble;
    }
  }
  return TopologyClass::custom;
}

// --- serialization -----------------------------------------------------------

nlohmann::json to_json(const GraphSpec& g) {
  nlohmann::json j;
  j["topology_class"] = std::string(to_string(g.topology_class()));
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices()) {
    nlohmann::json jv{{"id", v.id}, {"x", v.position.x}, {"y", v.position.y}};
    if (v.potential != 0.0) jv["potential"] = v.potential;
    vs.push_back(jv);
  }
  auto& adj = j["adjacency"] = nlohmann::json::array();
  for (const auto& e : g.edges()) adj.push_back({e.from, e.to});
  return j;
}

namespace {

[[noreturn]] void fail_at(const std::string& where, const std::string& what) {
  throw std::invalid_argument(where + ": " + what);
}

double number_at(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail_at(where, std::string("missing field '") + key + "'");
  if (!j[key].is_number()) fail_at(where + "/" + key, "expected a number");
  return j[key].get<double>();
}

}  // namespace

GraphSpec graph_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail_at("/", "graph must be a JSON object");
  if (!j.contains("vertices") || !j["vertices"].is_array()) fail_at("/vertices", "expected an array");
  if (!j.contains("adjacency") || !j["adjacency"].is_array()) fail_at("/adjacency", "expected an array");

  const auto& jv = j["vertices"];
  std::vector<Vec2> pos(jv.size());
  std::vector<double> pot(jv.size(), 0.0);
  std::vector<bool> filled(jv.size(), false);
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const std::string where = "/vertices/" + std::to_string(i);
    const auto& v = jv[i];
    if (!v.is_object()) fail_at(where, "expected an object");
    std::size_t id = i;
    if (v.contains("id")) {
      if (!v["id"].is_number_integer()) fail_at(where + "/id", "expected an integer");
      const auto raw = v["id"].get<long long>();
      if (raw < 0 || static_cast<std::size_t>(raw) >= jv.size()) fail_at(where + "/id", "id out of range");
      id = static_cast<std::size_t>(raw);
    }
    if (filled[id]) fail_at(where + "/id", "duplicate vertex id");
    filled[id] = true;
    pos[id] = {number_at(v, "x", where), number_at(v, "y", where)};
    if (v.contains("potential")) pot[id] = number_at(v, "potential", where);
  }

  const auto& ja = j["adjacency"];
  std::vector<std::pair<int, int>> adj;
  for (std::size_t k = 0; k < ja.size(); ++k) {
    const std::string where = "/adjacency/" + std::to_string(k);
    const auto& e = ja[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail_at(where, "expected a pair of vertex ids");
    adj.emplace_back(e[0].get<int>(), e[1].get<int>());
  }

  std::optional<TopologyClass> cls;
  if (j.contains("topology_class")) {
    if (!j["topology_class"].is_string()) fail_at("/topology_class", "expected a string");
    cls = topology_from_string(j["topology_class"].get<std::string>());
    if (!cls) fail_at("/topology_class", "unknown class '" + j["topology_class"].get<std::string>() + "'");
  }
  const bool any_potential = std::any_of(pot.begin(), pot.end(), [](double p) { return p != 0.0; });
  return build_graph(pos, adj, cls, any_potential ? pot : std::vector<double>{});
}

GraphSpec load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    return graph_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ":" + e.what());
  }
}

}  // namespace qgraph
