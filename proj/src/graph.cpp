#include "gsk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <utility>

#include "gsk/errors.hpp"

namespace gsk {

namespace {

// Distances are sums of edge lengths; comparisons against a radius allow for
// the rounding of those sums.
bool within(double distance, double r) { return distance <= r + 1e-12 * std::max(1.0, std::abs(r)); }

std::vector<double> dijkstra(const std::vector<std::vector<Neighbor>>& adjacency, Vertex source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(adjacency.size(), inf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : adjacency[u]) {
      const double alt = d + nb.length;
      if (alt < dist[nb.vertex]) {
        dist[nb.vertex] = alt;
        heap.emplace(alt, nb.vertex);
      }
    }
  }
  return dist;
}

}  // namespace

struct WeightedGraph::MetricCache {
  std::once_flag once;
  Eigen::MatrixXd table;
};

WeightedGraph::WeightedGraph(std::size_t n_vertices, std::vector<Edge> edges)
    : edges_(std::move(edges)), adjacency_(n_vertices), cache_(std::make_shared<MetricCache>()) {
  if (n_vertices < 2) {
    throw Error(ErrorCode::TooFewVertices, "a graph needs at least two vertices");
  }
  std::vector<std::pair<Vertex, Vertex>> seen;
  seen.reserve(edges_.size());
  for (const auto& e : edges_) {
    if (e.u >= n_vertices || e.v >= n_vertices) {
      throw Error(ErrorCode::InvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    }
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "self-loop at vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NonPositiveWeight,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw Error(ErrorCode::NonPositiveLength,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(seen.begin(), seen.end());
  if (auto it = std::adjacent_find(seen.begin(), seen.end()); it != seen.end()) {
    throw Error(ErrorCode::DuplicateEdge,
                "edge (" + std::to_string(it->first) + "," + std::to_string(it->second) + ")");
  }

  for (const auto& e : edges_) {
    adjacency_[e.u].push_back({e.v, e.weight, e.length});
    adjacency_[e.v].push_back({e.u, e.weight, e.length});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  // connectivity by breadth-first traversal
  std::vector<bool> reached(n_vertices, false);
  std::vector<Vertex> stack{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (const auto& nb : adjacency_[u]) {
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = true;
        ++count;
        stack.push_back(nb.vertex);
      }
    }
  }
  if (count != n_vertices) {
    throw Error(ErrorCode::DisconnectedGraph, std::to_string(n_vertices - count) +
                                                  " of " + std::to_string(n_vertices) +
                                                  " vertices unreachable from vertex 0");
  }
}

double WeightedGraph::weighted_degree(Vertex v) const {
  double sum = 0.0;
  for (const auto& nb : adjacency_.at(v)) sum += nb.weight;
  return sum;
}

double WeightedGraph::weight(Vertex u, Vertex v) const {
  const auto& list = adjacency_.at(u);
  auto it = std::lower_bound(list.begin(), list.end(), v,
                             [](const Neighbor& nb, Vertex x) { return nb.vertex < x; });
  return (it != list.end() && it->vertex == v) ? it->weight : 0.0;
}

const Eigen::MatrixXd& WeightedGraph::distances() const {
  std::call_once(cache_->once, [this] {
    const std::size_t n = size();
    Eigen::MatrixXd table(n, n);
    for (Vertex s = 0; s < n; ++s) {
      const auto row = dijkstra(adjacency_, s);
      for (Vertex t = 0; t < n; ++t) table(s, t) = row[t];
    }
    // Dijkstra rows agree up to summation order; keep the table exactly symmetric.
    cache_->table = 0.5 * (table + table.transpose());
  });
  return cache_->table;
}

double WeightedGraph::distance(Vertex u, Vertex v) const {
  if (u >= size() || v >= size()) throw Error(ErrorCode::InvalidArgument, "vertex out of range");
  return distances()(u, v);
}

GraphMetrics WeightedGraph::metrics() const {
  GraphMetrics m;
  for (const auto& list : adjacency_) m.max_degree = std::max(m.max_degree, list.size());
  for (const auto& e : edges_) m.rho_max = std::max(m.rho_max, e.length);
  m.diameter = distances().maxCoeff();
  return m;
}

WeightedGraph build_graph(std::size_t n_vertices, std::vector<Edge> edges) {
  return WeightedGraph(n_vertices, std::move(edges));
}

WeightedGraph build_graph(std::vector<Edge> edges) {
  std::size_t n = 0;
  for (const auto& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph cycle_graph(std::size_t n, double weight, double length) {
  if (n < 3) throw Error(ErrorCode::TooFewVertices, "cycle needs n >= 3");
  std::vector<Edge> edges;
  edges.reserve(n);
  for (Vertex i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, weight, length});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph lattice_graph(std::size_t rows, std::size_t cols, double weight, double length) {
  if (rows == 0 || cols == 0 || rows * cols < 2) {
    throw Error(ErrorCode::TooFewVertices, "lattice needs rows * cols >= 2");
  }
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const Vertex v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1, weight, length});
      if (r + 1 < rows) edges.push_back({v, v + cols, weight, length});
    }
  }
  return WeightedGraph(rows * cols, std::move(edges));
}

WeightedGraph knn_graph(const Eigen::MatrixXd& points, std::size_t k, KnnOptions options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (n < 2) throw Error(ErrorCode::TooFewVertices, "need at least two points");
  if (!points.allFinite()) throw Error(ErrorCode::InvalidArgument, "non-finite coordinate");
  const std::size_t kk = std::min(k, n - 1);

  // Pairwise distances, brute force.
  Eigen::MatrixXd dist(n, n);
  for (Vertex i = 0; i < n; ++i) {
    dist(i, i) = 0.0;
    for (Vertex j = i + 1; j < n; ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      dist(i, j) = dist(j, i) = d;
    }
  }

  std::vector<std::pair<Vertex, Vertex>> pairs;
  std::vector<Vertex> order(n);
  for (Vertex i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Vertex{0});
    std::swap(order[i], order.back());
    order.pop_back();
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                      [&](Vertex a, Vertex b) {
                        return dist(i, a) < dist(i, b) || (dist(i, a) == dist(i, b) && a < b);
                      });
    for (std::size_t r = 0; r < kk; ++r) {
      pairs.emplace_back(std::min(i, order[r]), std::max(i, order[r]));
    }
    order.resize(n);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    double len = dist(u, v);
    if (len == 0.0) {
      if (options.duplicate_length <= 0.0) {
        throw Error(ErrorCode::DuplicatePoint,
                    "points " + std::to_string(u) + " and " + std::to_string(v) + " coincide");
      }
      len = options.duplicate_length;
    }
    edges.push_back({u, v, 1.0 / len, len});
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph random_connected_graph(std::size_t n, double extra_edge_prob, std::uint64_t seed,
                                     bool unit_lengths) {
  if (n < 2) throw Error(ErrorCode::TooFewVertices, "need at least two vertices");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.5, 2.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  auto add = [&](Vertex u, Vertex v) {
    present[u][v] = present[v][u] = true;
    const double w = value(rng);
    const double len = unit_lengths ? 1.0 : value(rng);
    edges.push_back({std::min(u, v), std::max(u, v), w, len});
  };
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<Vertex> parent(0, v - 1);
    add(parent(rng), v);
  }
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (!present[u][v] && coin(rng) < extra_edge_prob) add(u, v);
    }
  }
  return WeightedGraph(n, std::move(edges));
}

std::vector<Vertex> ball(const WeightedGraph& g, Vertex center, double r) {
  if (center >= g.size()) throw Error(ErrorCode::InvalidArgument, "center out of range");
  if (r < 0.0) throw Error(ErrorCode::InvalidArgument, "negative radius");
  const auto& d = g.distances();
  std::vector<Vertex> out;
  for (Vertex u = 0; u < g.size(); ++u) {
    if (within(d(center, u), r)) out.push_back(u);
  }
  return out;
}

std::vector<Vertex> annulus(const WeightedGraph& g, Vertex center, double r0, double r1) {
  if (center >= g.size()) throw Error(ErrorCode::InvalidArgument, "center out of range");
  if (r0 < 0.0 || r1 < r0) throw Error(ErrorCode::InvalidArgument, "need 0 <= r0 <= r1");
  const auto& d = g.distances();
  std::vector<Vertex> out;
  for (Vertex u = 0; u < g.size(); ++u) {
    if (within(d(center, u), r1) && !within(d(center, u), r0)) out.push_back(u);
  }
  return out;
}

double fill_distance(const WeightedGraph& g, std::span<const Vertex> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::EmptyNodeSet, "fill distance of an empty node set");
  for (Vertex v : nodes) {
    if (v >= g.size()) throw Error(ErrorCode::InvalidArgument, "node out of range");
  }
  const auto& d = g.distances();
  double h = 0.0;
  for (Vertex v = 0; v < g.size(); ++v) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Vertex node : nodes) nearest = std::min(nearest, d(v, node));
    h = std::max(h, nearest);
  }
  return h;
}

std::vector<bool> membership(std::size_t n, std::span<const Vertex> subset) {
  std::vector<bool> in(n, false);
  for (Vertex v : subset) {
    if (v >= n) throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " out of range");
    if (in[v]) throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(v) + " repeated");
    in[v] = true;
  }
  return in;
}

}  // namespace gsk
