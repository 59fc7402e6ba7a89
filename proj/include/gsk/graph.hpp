#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gsk {

using Vertex = std::size_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double weight = 1.0;  // adjacency entry w(u,v) > 0
  double length = 1.0;  // distance between the endpoints, > 0
};

struct Neighbor {
  Vertex vertex;
  double weight;
  double length;
};

struct GraphMetrics {
  std::size_t max_degree = 0;  // M
  double rho_max = 0.0;        // longest edge
  double diameter = 0.0;       // max shortest-path distance
};

// Finite, connected, undirected weighted graph with an edge-length metric.
//
// The metric rho is the shortest-path distance induced by edge lengths, so an
// edge longer than some detour is measured along the detour. The all-pairs
// table is computed on first use and shared between copies; graphs are
// immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const Neighbor> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  // Row sum of the adjacency matrix.
  double weighted_degree(Vertex v) const;
  // w(u,v), zero when there is no edge.
  double weight(Vertex u, Vertex v) const;

  double distance(Vertex u, Vertex v) const;
  // N x N shortest-path table (Dijkstra from every source).
  const Eigen::MatrixXd& distances() const;
  GraphMetrics metrics() const;

 private:
  struct MetricCache;

  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::shared_ptr<MetricCache> cache_;
};

// Validates and builds a graph; `n_vertices` may exceed the largest index
// (isolated vertices are then reported as DisconnectedGraph).
WeightedGraph build_graph(std::size_t n_vertices, std::vector<Edge> edges);
// Vertex count taken as 1 + the largest index in the list.
WeightedGraph build_graph(std::vector<Edge> edges);

WeightedGraph cycle_graph(std::size_t n, double weight = 1.0, double length = 1.0);
// 4-neighbour grid, vertex (r, c) has index r * cols + c.
WeightedGraph lattice_graph(std::size_t rows, std::size_t cols, double weight = 1.0,
                            double length = 1.0);

struct KnnOptions {
  // When positive, coincident points are joined by an edge of this length
  // instead of raising DuplicatePoint.
  double duplicate_length = 0.0;
};

// Symmetrised (union) k-nearest-neighbour graph over the rows of `points`.
// Edge length is the Euclidean distance, edge weight its reciprocal. Ties are
// broken by the lower index.
WeightedGraph knn_graph(const Eigen::MatrixXd& points, std::size_t k, KnnOptions options = {});

// Random spanning tree plus extra edges with probability `extra_edge_prob`.
// Weights and lengths are drawn from [0.5, 2].
WeightedGraph random_connected_graph(std::size_t n, double extra_edge_prob, std::uint64_t seed,
                                     bool unit_lengths = false);

// {u : rho(u, center) <= r}, ascending.
std::vector<Vertex> ball(const WeightedGraph& g, Vertex center, double r);
// ball(r1) \ ball(r0), ascending.
std::vector<Vertex> annulus(const WeightedGraph& g, Vertex center, double r0, double r1);
// max over vertices of the distance to the nearest node.
double fill_distance(const WeightedGraph& g, std::span<const Vertex> nodes);

// Indicator vector of a vertex subset; throws on out-of-range or repeated entries.
std::vector<bool> membership(std::size_t n, std::span<const Vertex> subset);

}  // namespace gsk
