#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qgraph {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class VertexKind { internal, terminal };

struct Vertex {
  int id = 0;
  Vec2 position;
  VertexKind kind = VertexKind::internal;
  int degree = 0;
  /// Strength of a point potential sitting on the vertex. The matching
  /// condition becomes  sum of outward derivatives = 2 * potential * psi(v).
  double potential = 0.0;
};

/// Straight edge parameterized by 0 <= s <= length, s = 0 at `from`.
struct Edge {
  int id = 0;
  int from = 0;
  int to = 0;
  double length = 0.0;
  double angle = 0.0;  ///< direction against the graph x-axis, radians
  Vec2 origin_offset;  ///< position of the s = 0 end relative to the graph origin

  [[nodiscard]] Vec2 point_at(double s) const;
};

enum class TopologyClass {
  wire,
  bent_wire,
  loop,
  star3,
  star4,
  star5,
  star6,
  star7,
  lollipop,
  bull,
  lollipop_bull,
  open_lollipop,
  wire_lollipop,
  barbell_fork_lollipop,
  barbell_dual_fork,
  barbell_star_loop,
  barbell_line,
  barbell_loop,
  star_star,
  pop_star,
  bubble,
  delta_wire,
  custom,
};

[[nodiscard]] std::string_view to_string(TopologyClass c);
[[nodiscard]] std::optional<TopologyClass> topology_from_string(std::string_view name);
[[nodiscard]] const std::vector<TopologyClass>& all_topology_classes();

/// Maps a catalog class onto the class its adjacency alone implies. Several
/// catalog classes share a topology and differ only in how the geometry is
/// drawn (an open lollipop is a 3-star with one bent prong).
[[nodiscard]] TopologyClass signature_class(TopologyClass c);

/// Immutable metric graph. The graph origin is the first listed vertex.
class GraphSpec {
 public:
  GraphSpec() = default;

  [[nodiscard]] const std::vector<Vertex>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] TopologyClass topology_class() const { return topology_; }
  [[nodiscard]] bool closed() const { return closed_; }

  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] double total_length() const;
  [[nodiscard]] int cycle_rank() const;
  [[nodiscard]] std::size_t terminal_count() const;
  [[nodiscard]] std::size_t internal_count() const;
  [[nodiscard]] bool has_potentials() const;

  /// Edges incident to vertex `v` (an edge appears once per endpoint).
  [[nodiscard]] const std::vector<int>& incident(int v) const { return incidence_[static_cast<std::size_t>(v)]; }

  /// Amplitude conditions at terminals + flux conditions at internal vertices
  /// + continuity conditions at internal vertices. Always equals 2E.
  [[nodiscard]] int boundary_condition_count() const;

  /// Same graph with every vertex moved by `shift`.
  [[nodiscard]] GraphSpec translated(Vec2 shift) const;
  /// Same graph rotated by `alpha` about the origin vertex.
  [[nodiscard]] GraphSpec rotated(double alpha) const;

  [[nodiscard]] std::vector<Vec2> positions() const;
  [[nodiscard]] std::vector<std::pair<int, int>> adjacency() const;
  [[nodiscard]] std::vector<double> potentials() const;

  friend GraphSpec build_graph(const std::vector<Vec2>&, const std::vector<std::pair<int, int>>&,
                               std::optional<TopologyClass>, const std::vector<double>&);

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incidence_;
  TopologyClass topology_ = TopologyClass::custom;
  bool closed_ = false;
};

/// Builds and validates a graph. Throws std::invalid_argument for an empty
/// edge list, zero-length edges, duplicate edges, self loops, out-of-range
/// ids, or a disconnected graph. When `declared` is given it must share the
/// adjacency signature of the graph (custom is always accepted); otherwise the
/// class is inferred from degrees and cycle structure.
GraphSpec build_graph(const std::vector<Vec2>& positions, const std::vector<std::pair<int, int>>& adjacency,
                      std::optional<TopologyClass> declared = std::nullopt,
                      const std::vector<double>& potentials = {});

/// Classification by degree sequence and cycle structure only.
[[nodiscard]] TopologyClass classify(const GraphSpec& g);

// --- motif decomposition ---------------------------------------------------

/// Maximal chain of edges whose interior vertices all have degree 2 and no
/// potential. Chains start and stop at motif centers or terminals.
struct Channel {
  enum class Kind { terminal, coupling, loop, open_path, closed_cycle };
  Kind kind = Kind::terminal;
  int start = 0;  ///< center vertex (or first stop vertex)
  int end = 0;    ///< other stop vertex; equals start for loops
  double length = 0.0;
  std::vector<int> edges;          ///< edge ids in traversal order
  std::vector<int> folded_vertices;  ///< degree-2 vertices absorbed into the chain
};

struct MotifInstance {
  enum class Kind { star, lollipop, dressed };
  Kind kind = Kind::star;
  int center = 0;                  ///< vertex id
  double potential = 0.0;          ///< point potential at the center
  std::vector<int> channels;       ///< indices into Decomposition::channels
  [[nodiscard]] int arity(const std::vector<Channel>& all) const;  ///< non-loop channel count
};

struct Decomposition {
  std::vector<MotifInstance> motifs;
  std::vector<Channel> channels;
  /// Motif index per vertex, -1 for terminals and folded vertices.
  std::vector<int> motif_of_vertex;
  /// Channel index per vertex for folded degree-2 vertices, -1 otherwise.
  std::vector<int> channel_of_vertex;
};

/// Splits a graph into N-star and lollipop motifs joined by coupling
/// channels. Vertices with a potential become dressed centers so that the
/// wire with a point potential has a one-vertex decomposition.
[[nodiscard]] Decomposition motif_decompose(const GraphSpec& g);

// --- serialization -----------------------------------------------------------

[[nodiscard]] nlohmann::json to_json(const GraphSpec& g);
/// Throws std::invalid_argument with a JSON-pointer style location on bad input.
[[nodiscard]] GraphSpec graph_from_json(const nlohmann::json& j);
[[nodiscard]] GraphSpec load_graph(const std::string& path);

}  // namespace qgraph
