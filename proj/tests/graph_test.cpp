#include "equiflow/graph.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace equiflow {
namespace {

Graph MakeLine(std::vector<double> t0s) {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  for (int i = 0; i <= static_cast<int>(t0s.size()); ++i) nodes.push_back({i});
  for (int i = 0; i < static_cast<int>(t0s.size()); ++i)
    edges.push_back({i, i + 1, t0s[i], 100.0});
  return Graph(std::move(nodes), std::move(edges));
}

// 0->1->3 (2+2) vs 0->2->3 (1+2).
Graph MakeDiamond() {
  std::vector<Node> nodes = {{0}, {1}, {2}, {3}};
  std::vector<Edge> edges = {
      {0, 1, 2.0, 100.0}, {1, 3, 2.0, 100.0}, {0, 2, 1.0, 100.0}, {2, 3, 2.0, 100.0}};
  return Graph(std::move(nodes), std::move(edges));
}

TEST(Bpr, FreeFlow) {
  Edge e{0, 1, 10.0, 100.0};
  EXPECT_DOUBLE_EQ(bpr_travel_time(e, 0.0), 10.0);
}

TEST(Bpr, AtCapacity) {
  Edge e{0, 1, 10.0, 100.0};
  EXPECT_DOUBLE_EQ(bpr_travel_time(e, 100.0), 11.5);
}

TEST(Bpr, TwiceCapacity) {
  Edge e{0, 1, 10.0, 100.0};
  EXPECT_DOUBLE_EQ(bpr_travel_time(e, 200.0), 34.0);
}

TEST(Bpr, NegativeFlowThrows) {
  Edge e{0, 1, 10.0, 100.0};
  EXPECT_THROW(bpr_travel_time(e, -1.0), std::domain_error);
  EXPECT_THROW(bpr_integral(e, -1.0), std::domain_error);
}

TEST(Bpr, IntegralValues) {
  Edge e{0, 1, 10.0, 100.0};
  EXPECT_DOUBLE_EQ(bpr_integral(e, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(bpr_integral(e, 100.0), 1030.0);
  Edge unit{0, 1, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(bpr_integral(unit, 2.0), 2.0 * (1.0 + 0.03 * 16.0));
}

TEST(Bpr, MonotoneAndConvex) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Edge e{0, 1, 1.0 + 9.0 * (rng() / 4294967296.0), 50.0 + 1950.0 * (rng() / 4294967296.0)};
    double f1 = 3.0 * e.capacity * (rng() / 4294967296.0);
    double f2 = 3.0 * e.capacity * (rng() / 4294967296.0);
    if (f1 > f2) std::swap(f1, f2);
    if (f2 - f1 < 1e-9) continue;
    EXPECT_LT(bpr_travel_time(e, f1), bpr_travel_time(e, f2));
    const double mid = bpr_travel_time(e, 0.5 * (f1 + f2));
    EXPECT_LE(mid, 0.5 * (bpr_travel_time(e, f1) + bpr_travel_time(e, f2)) + 1e-12);
  }
}

// d/dx bpr_integral == bpr_travel_time, central finite differences.
TEST(Bpr, IntegralDerivativeMatchesLatency) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    Edge e{0, 1, 1.0 + 9.0 * (rng() / 4294967296.0), 100.0 + 1900.0 * (rng() / 4294967296.0)};
    const double f = 0.1 + 2.5 * e.capacity * (rng() / 4294967296.0);
    const double h = std::max(1e-4, f * 1e-6);
    const double numeric = (bpr_integral(e, f + h) - bpr_integral(e, f - h)) / (2.0 * h);
    const double exact = bpr_travel_time(e, f);
    EXPECT_NEAR(numeric / exact, 1.0, 1e-6);
  }
}

TEST(Graph, RejectsBadStructure) {
  EXPECT_THROW(Graph({{0}, {1}}, {{0, 0, 1.0, 1.0}}), std::invalid_argument);  // self-loop
  EXPECT_THROW(Graph({{0}, {1}}, {{0, 2, 1.0, 1.0}}), std::invalid_argument);  // bad head
  EXPECT_THROW(Graph({{0}, {1}}, {{0, 1, 0.0, 1.0}}), std::invalid_argument);  // t0 = 0
  EXPECT_THROW(Graph({{0}, {1}}, {{0, 1, 1.0, -1.0}}), std::invalid_argument); // capacity < 0
  EXPECT_THROW(Graph({{0}, {1}}, {{0, 1, 1.0, 1.0}, {0, 1, 2.0, 1.0}}),
               std::invalid_argument);  // duplicate pair
  EXPECT_THROW(Graph({{0}, {0}}, {}), std::invalid_argument);  // duplicate id
  EXPECT_THROW(Graph({{0}, {5}}, {}), std::invalid_argument);  // non-dense id
}

TEST(ShortestPath, LineGraph) {
  Graph g = MakeLine({3.0, 4.0});
  auto tree = shortest_path_tree(g, free_flow_times(g), 0);
  EXPECT_DOUBLE_EQ(tree.dist[0], 0.0);
  EXPECT_DOUBLE_EQ(tree.dist[1], 3.0);
  EXPECT_DOUBLE_EQ(tree.dist[2], 7.0);
}

TEST(ShortestPath, DiamondTakesCheaperBranch) {
  Graph g = MakeDiamond();
  auto tree = shortest_path_tree(g, free_flow_times(g), 0);
  EXPECT_DOUBLE_EQ(tree.dist[3], 3.0);
  auto path = extract_path(g, tree, 3);
  ASSERT_EQ(path.size(), 2u);
  EXPECT_EQ(g.edge(path[0]).head, 2);  // via node 2
}

TEST(ShortestPath, IsolatedOrigin) {
  Graph g({{0}, {1}, {2}}, {{1, 2, 1.0, 1.0}});
  auto tree = shortest_path_tree(g, free_flow_times(g), 0);
  EXPECT_EQ(tree.dist[1], kInfiniteTime);
  EXPECT_EQ(tree.dist[2], kInfiniteTime);
}

TEST(ShortestPath, InvalidOriginThrows) {
  Graph g = MakeDiamond();
  EXPECT_THROW(shortest_path_tree(g, free_flow_times(g), -1), std::invalid_argument);
  EXPECT_THROW(shortest_path_tree(g, free_flow_times(g), 4), std::invalid_argument);
}

// Exhaustive DFS over simple paths; the independent oracle for Dijkstra.
void EnumeratePaths(const Graph& g, const EdgeTimes& times, int node, double cost,
                    std::vector<bool>& visited, std::vector<double>& best) {
  if (cost < best[node]) best[node] = cost;
  for (int k : g.out_edges(node)) {
    const int next = g.edge(k).head;
    if (visited[next]) continue;
    visited[next] = true;
    EnumeratePaths(g, times, next, cost + times[k], visited, best);
    visited[next] = false;
  }
}

std::vector<double> BruteForceDistances(const Graph& g, const EdgeTimes& times, int origin) {
  std::vector<double> best(g.num_nodes(), kInfiniteTime);
  std::vector<bool> visited(g.num_nodes(), false);
  visited[origin] = true;
  EnumeratePaths(g, times, origin, 0.0, visited, best);
  return best;
}

Graph RandomGraph(std::mt19937& rng, int max_nodes) {
  const int n = 2 + static_cast<int>(rng() % (max_nodes - 1));
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i});
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (rng() % 100 < 45) {
        const double t0 = 0.5 + 9.5 * (rng() / 4294967296.0);
        edges.push_back({i, j, t0, 100.0});
      }
    }
  return Graph(std::move(nodes), std::move(edges));
}

TEST(ShortestPath, MatchesExhaustiveEnumerationOnRandomGraphs) {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    Graph g = RandomGraph(rng, 8);
    const EdgeTimes times = free_flow_times(g);
    const int origin = static_cast<int>(rng() % g.num_nodes());
    auto tree = shortest_path_tree(g, times, origin);
    auto oracle = BruteForceDistances(g, times, origin);
    for (int v = 0; v < g.num_nodes(); ++v) {
      if (oracle[v] == kInfiniteTime)
        EXPECT_EQ(tree.dist[v], kInfiniteTime);
      else
        EXPECT_NEAR(tree.dist[v], oracle[v], 1e-9);
    }
  }
}

TEST(ShortestPath, TriangleRelaxationHolds) {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    Graph g = RandomGraph(rng, 8);
    const EdgeTimes times = free_flow_times(g);
    auto tree = shortest_path_tree(g, times, 0);
    for (int k = 0; k < g.num_edges(); ++k) {
      const Edge& e = g.edge(k);
      if (tree.dist[e.tail] == kInfiniteTime) continue;
      EXPECT_LE(tree.dist[e.head], tree.dist[e.tail] + times[k] + 1e-12);
    }
  }
}

TEST(Connectivity, ConnectedDiamond) {
  Graph g = MakeDiamond();
  EXPECT_TRUE(validate_connectivity(g, {{0, 3}}).ok());
}

TEST(Connectivity, DisjointComponentsReported) {
  Graph g({{0}, {1}, {2}, {3}}, {{0, 1, 1.0, 1.0}, {2, 3, 1.0, 1.0}});
  auto report = validate_connectivity(g, {{0, 3}, {2, 3}});
  ASSERT_EQ(report.disconnected.size(), 1u);
  EXPECT_EQ(report.disconnected[0].origin, 0);
  EXPECT_EQ(report.disconnected[0].destination, 3);
}

TEST(Connectivity, EmptyTripListOk) {
  Graph g = MakeDiamond();
  EXPECT_TRUE(validate_connectivity(g, {}).ok());
}

}  // namespace
}  // namespace equiflow
