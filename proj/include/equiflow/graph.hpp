#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

// Directed road network, BPR congestion latency, and shortest-path machinery.
// Units throughout: travel times in minutes, capacities and flows in
// vehicles per hour. Conversions happen only at I/O boundaries.

namespace equiflow {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct Node {
  int id = 0;
  double x = 0.0;  // km, used for plotting only
  double y = 0.0;
  bool has_coords = false;

  bool operator==(const Node&) const = default;
};

struct Edge {
  int tail = 0;
  int head = 0;
  double t0 = 0.0;        // free-flow travel time [min]
  double capacity = 0.0;  // [veh/h]

  bool operator==(const Edge&) const = default;
};

/// Immutable directed network. Node ids are dense in [0, |V|).
/// Safe to share across threads once constructed.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<Node> nodes, std::vector<Edge> edges)
      : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    const int n = static_cast<int>(nodes_.size());
    std::vector<bool> seen(n, false);
    for (const Node& v : nodes_) {
      if (v.id < 0 || v.id >= n)
        throw std::invalid_argument("graph: node id " + std::to_string(v.id) +
                                    " not dense in [0, |V|)");
      if (seen[v.id])
        throw std::invalid_argument("graph: duplicate node id " + std::to_string(v.id));
      seen[v.id] = true;
    }
    out_.assign(n, {});
    std::vector<std::vector<int>> heads(n);
    for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
      const Edge& e = edges_[k];
      if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
        throw std::invalid_argument("graph: edge " + std::to_string(k) +
                                    " references unknown node");
      if (e.tail == e.head)
        throw std::invalid_argument("graph: edge " + std::to_string(k) + " is a self-loop");
      if (!(e.t0 > 0.0))
        throw std::invalid_argument("graph: edge " + std::to_string(k) + " needs t0 > 0");
      if (!(e.capacity > 0.0))
        throw std::invalid_argument("graph: edge " + std::to_string(k) +
                                    " needs capacity > 0");
      auto& h = heads[e.tail];
      if (std::find(h.begin(), h.end(), e.head) != h.end())
        throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.tail) +
                                    ", " + std::to_string(e.head) + ")");
      h.push_back(e.head);
      out_[e.tail].push_back(k);
    }
  }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int k) const { return edges_[k]; }
  const std::vector<int>& out_edges(int node) const { return out_[node]; }

  bool operator==(const Graph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;  // node -> outgoing edge indices
};

/// Per-edge travel times [min], same order as Graph::edges().
using EdgeTimes = std::vector<double>;

/// BPR latency t0 * (1 + 0.15 (x/capacity)^4). Strictly increasing and
/// convex in the flow.
inline double bpr_travel_time(const Edge& e, double total_flow) {
  if (total_flow < 0.0) throw std::domain_error("bpr_travel_time: negative flow");
  const double r = total_flow / e.capacity;
  const double r2 = r * r;
  return e.t0 * (1.0 + 0.15 * r2 * r2);
}

/// Integral of the BPR latency from 0 to total_flow, t0 * x * (1 + 0.03 (x/capacity)^4).
/// Its derivative in the flow equals bpr_travel_time.
inline double bpr_integral(const Edge& e, double total_flow) {
  if (total_flow < 0.0) throw std::domain_error("bpr_integral: negative flow");
  const double r = total_flow / e.capacity;
  const double r2 = r * r;
  return e.t0 * total_flow * (1.0 + 0.03 * r2 * r2);
}

/// Derivative of the BPR latency in the flow.
inline double bpr_travel_time_derivative(const Edge& e, double total_flow) {
  if (total_flow < 0.0) throw std::domain_error("bpr_travel_time_derivative: negative flow");
  const double r = total_flow / e.capacity;
  return e.t0 * 0.6 * r * r * r / e.capacity;
}

inline EdgeTimes free_flow_times(const Graph& g) {
  EdgeTimes t(g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) t[k] = g.edge(k).t0;
  return t;
}

/// Edge times under the given per-edge total flows.
inline EdgeTimes loaded_times(const Graph& g, const std::vector<double>& total_flow) {
  EdgeTimes t(g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) t[k] = bpr_travel_time(g.edge(k), total_flow[k]);
  return t;
}

struct ShortestPathTree {
  std::vector<double> dist;   // minutes from origin; kInfiniteTime if unreachable
  std::vector<int> pred_edge; // incoming tree edge per node; -1 for origin/unreachable
};

/// Dijkstra from a single origin. Ties on distance pop the smaller node id
/// first, so the tree is deterministic across runs and platforms.
inline ShortestPathTree shortest_path_tree(const Graph& g, const EdgeTimes& times,
                                           int origin) {
  if (origin < 0 || origin >= g.num_nodes())
    throw std::invalid_argument("shortest_path_tree: invalid origin id " +
                                std::to_string(origin));
  if (static_cast<int>(times.size()) != g.num_edges())
    throw std::invalid_argument("shortest_path_tree: times size mismatch");

  ShortestPathTree tree;
  tree.dist.assign(g.num_nodes(), kInfiniteTime);
  tree.pred_edge.assign(g.num_nodes(), -1);
  tree.dist[origin] = 0.0;

  using Entry = std::pair<double, int>;  // (dist, node); pair ordering breaks ties by id
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  heap.emplace(0.0, origin);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > tree.dist[u]) continue;  // stale entry
    for (int k : g.out_edges(u)) {
      const Edge& e = g.edge(k);
      const double nd = d + times[k];
      if (nd < tree.dist[e.head]) {
        tree.dist[e.head] = nd;
        tree.pred_edge[e.head] = k;
        heap.emplace(nd, e.head);
      }
    }
  }
  return tree;
}

/// Edge indices of the tree path origin -> destination, in travel order.
inline std::vector<int> extract_path(const Graph& g, const ShortestPathTree& tree,
                                     int destination) {
  if (destination < 0 || destination >= g.num_nodes())
    throw std::invalid_argument("extract_path: invalid destination id");
  if (tree.dist[destination] == kInfiniteTime)
    throw std::runtime_error("extract_path: destination unreachable");
  std::vector<int> path;
  int v = destination;
  while (tree.pred_edge[v] >= 0) {
    const int k = tree.pred_edge[v];
    path.push_back(k);
    v = g.edge(k).tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

struct TripRef {
  int origin = 0;
  int destination = 0;

  bool operator==(const TripRef&) const = default;
};

struct ConnectivityReport {
  std::vector<TripRef> disconnected;
  bool ok() const { return disconnected.empty(); }
};

/// Checks every trip's destination is reachable from its origin under
/// free-flow times. Reachability does not depend on the (finite) times.
inline ConnectivityReport validate_connectivity(const Graph& g,
                                                const std::vector<TripRef>& trips) {
  ConnectivityReport report;
  const EdgeTimes t0 = free_flow_times(g);
  std::vector<std::optional<ShortestPathTree>> cache(g.num_nodes());
  for (const TripRef& trip : trips) {
    if (trip.origin < 0 || trip.origin >= g.num_nodes() || trip.destination < 0 ||
        trip.destination >= g.num_nodes()) {
      report.disconnected.push_back(trip);
      continue;
    }
    auto& tree = cache[trip.origin];
    if (!tree) tree = shortest_path_tree(g, t0, trip.origin);
    if (tree->dist[trip.destination] == kInfiniteTime) report.disconnected.push_back(trip);
  }
  return report;
}

}  // namespace equiflow
