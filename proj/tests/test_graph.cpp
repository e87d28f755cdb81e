#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "qgraph/ensemble.hpp"

using namespace qgraph;

namespace {

GraphSpec lollipop() {
  return build_graph({{0, 0}, {-1, 0}, {0.5, 0.3}, {0.5, -0.3}}, {{0, 1}, {0, 2}, {2, 3}, {3, 0}});
}

}  // namespace

TEST_CASE("validation rejects malformed graphs") {
  CHECK_THROWS_AS(build_graph({{0, 0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 0}, {1, 0}}, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 0}, {0, 0}}, {{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 0}, {1, 0}}, {{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {{0, 1}, {2, 3}}), std::invalid_argument);
  // declared class must share the adjacency signature
  CHECK_THROWS_AS(build_graph({{0, 0}, {1, 0}}, {{0, 1}}, TopologyClass::star3), std::invalid_argument);
  CHECK_NOTHROW(build_graph({{0, 0}, {1, 0}}, {{0, 1}}, TopologyClass::custom));
}

TEST_CASE("boundary-condition count is twice the edge count") {
  for (const auto c : all_topology_classes()) {
    if (c == TopologyClass::custom) continue;
    auto rng = sample_rng(3, 0);
    const auto g = sample_graph(c, rng);
    CAPTURE(to_string(c));
    CHECK(g.boundary_condition_count() == 2 * static_cast<int>(g.edge_count()));
  }
}

TEST_CASE("sampled geometries carry the class adjacency") {
  for (const auto c : all_topology_classes()) {
    if (c == TopologyClass::custom) continue;
    CAPTURE(to_string(c));
    for (int id = 0; id < 20; ++id) {
      auto rng = sample_rng(11, static_cast<std::uint64_t>(id));
      const auto g = sample_graph(c, rng);
      CHECK(g.topology_class() == c);
      CHECK(classify(g) == signature_class(c));
      double longest = 0.0;
      for (const auto& e : g.edges()) {
        CHECK(e.length >= 0.05 - 1e-12);
        longest = std::max(longest, e.length);
      }
      if (c != TopologyClass::delta_wire) CHECK(longest == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("class names round trip") {
  for (const auto c : all_topology_classes()) {
    CHECK(topology_from_string(to_string(c)) == c);
  }
  CHECK_FALSE(topology_from_string("hexagon").has_value());
}

TEST_CASE("classification of small graphs") {
  CHECK(classify(build_graph({{0, 0}, {1, 0}}, {{0, 1}})) == TopologyClass::wire);
  CHECK(classify(build_graph({{0, 0}, {1, 0}, {1, 1}}, {{0, 1}, {1, 2}})) == TopologyClass::bent_wire);
  CHECK(classify(build_graph({{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 2}, {2, 0}})) == TopologyClass::loop);
  CHECK(classify(build_graph({{0, 0}, {1, 0}, {0, 1}, {-1, 0}}, {{0, 1}, {0, 2}, {0, 3}})) == TopologyClass::star3);
  CHECK(classify(lollipop()) == TopologyClass::lollipop);
  const auto g = lollipop();
  CHECK(g.cycle_rank() == 1);
  CHECK(g.terminal_count() == 1);
  CHECK(g.closed() == false);
  CHECK(build_graph({{0, 0}, {1, 0}, {0, 1}}, {{0, 1}, {1, 2}, {2, 0}}).closed());
}

TEST_CASE("motif decomposition of a lollipop") {
  const auto d = motif_decompose(lollipop());
  REQUIRE(d.motifs.size() == 1);
  CHECK(d.motifs[0].kind == MotifInstance::Kind::lollipop);
  CHECK(d.motifs[0].center == 0);
  int loops = 0;
  int terminals = 0;
  for (const auto& ch : d.channels) {
    loops += ch.kind == Channel::Kind::loop;
    terminals += ch.kind == Channel::Kind::terminal;
  }
  CHECK(loops == 1);
  CHECK(terminals == 1);
  // folded loop vertices belong to the loop channel
  CHECK(d.channel_of_vertex[2] >= 0);
  CHECK(d.channel_of_vertex[3] == d.channel_of_vertex[2]);
}

TEST_CASE("motif decomposition of two joined stars") {
  const auto g = build_graph({{0, 0}, {-1, 0.5}, {-1, -0.5}, {1, 0}, {2, 0.5}, {2, -0.5}},
                             {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}});
  const auto d = motif_decompose(g);
  CHECK(d.motifs.size() == 2);
  int couplings = 0;
  for (const auto& ch : d.channels) couplings += ch.kind == Channel::Kind::coupling;
  CHECK(couplings == 1);
}

TEST_CASE("a potential dresses a degree-two vertex") {
  const auto g = build_graph({{0, 0}, {0.3, 0}, {1, 0}}, {{0, 1}, {1, 2}}, std::nullopt, {0, -2.0, 0});
  const auto d = motif_decompose(g);
  REQUIRE(d.motifs.size() == 1);
  CHECK(d.motifs[0].kind == MotifInstance::Kind::dressed);
  CHECK(d.motifs[0].potential == -2.0);
}

TEST_CASE("json round trip") {
  const auto g = build_graph({{0.1, 0.2}, {1.3, 0.2}, {0.7, 0.9}}, {{0, 1}, {1, 2}}, std::nullopt, {0, 1.5, 0});
  const auto back = graph_from_json(to_json(g));
  REQUIRE(back.vertex_count() == g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    CHECK(back.vertices()[i].position.x == g.vertices()[i].position.x);
    CHECK(back.vertices()[i].position.y == g.vertices()[i].position.y);
    CHECK(back.vertices()[i].potential == g.vertices()[i].potential);
  }
  CHECK(back.adjacency() == g.adjacency());
  CHECK(back.topology_class() == g.topology_class());
}

TEST_CASE("json errors name the location") {
  auto message = [](const nlohmann::json& j) {
    try {
      (void)graph_from_json(j);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  using nlohmann::json;
  CHECK(message(json::array()).find("/") == 0);
  CHECK(message(json{{"vertices", json::array()}}).find("/adjacency") != std::string::npos);
  const json bad_x = {{"vertices", {{{"x", 0}, {"y", 0}}, {{"x", "one"}, {"y", 0}}}}, {"adjacency", {{0, 1}}}};
  CHECK(message(bad_x).find("/vertices/1/x") != std::string::npos);
  const json bad_pair = {{"vertices", {{{"x", 0}, {"y", 0}}, {{"x", 1}, {"y", 0}}}}, {"adjacency", {{0}}}};
  CHECK(message(bad_pair).find("/adjacency/0") != std::string::npos);
  const json bad_class = {{"topology_class", "hexagon"}, {"vertices", {{{"x", 0}, {"y", 0}}, {{"x", 1}, {"y", 0}}}},
                          {"adjacency", {{0, 1}}}};
  CHECK(message(bad_class).find("/topology_class") != std::string::npos);
}

TEST_CASE("fixture files load") {
  for (const char* name : {"wire", "star3_optimum", "triangle", "lollipop", "delta_wire"}) {
    CAPTURE(name);
    CHECK_NOTHROW((void)load_graph(std::string(QGRAPH_FIXTURES) + "/" + name + ".json"));
  }
  CHECK_THROWS_AS((void)load_graph(std::string(QGRAPH_FIXTURES) + "/malformed.json"), std::invalid_argument);
  CHECK_THROWS_AS((void)load_graph(std::string(QGRAPH_FIXTURES) + "/absent.json"), std::invalid_argument);
}

TEST_CASE("translation and rotation move the geometry rigidly") {
  const auto g = lollipop();
  const auto t = g.translated({0.4, -2.0});
  const auto r = g.rotated(0.7);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    CHECK(t.vertices()[i].position.x == doctest::Approx(g.vertices()[i].position.x + 0.4));
    CHECK(t.vertices()[i].position.y == doctest::Approx(g.vertices()[i].position.y - 2.0));
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    CHECK(r.edges()[e].length == doctest::Approx(g.edges()[e].length).epsilon(1e-14));
    const double d = std::remainder(r.edges()[e].angle - g.edges()[e].angle - 0.7, 2 * std::numbers::pi);
    CHECK(std::abs(d) < 1e-12);
  }
  // points along each edge follow the vertex positions
  for (const auto& e : g.edges()) {
    const auto end = e.point_at(e.length);
    const auto& to = g.vertices()[static_cast<std::size_t>(e.to)].position;
    const auto& o = g.vertices().front().position;
    CHECK(end.x == doctest::Approx(to.x - o.x));
    CHECK(end.y == doctest::Approx(to.y - o.y));
  }
}
