#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "equiflow/equity.hpp"
#include "equiflow/graph.hpp"

// Traffic-flow solvers: system-centric routing for compliant vehicles,
// cognitive-hierarchy routing for non-compliant vehicles, a Wardrop
// equilibrium reference, and the alternating coupling loop. Every solve is
// sequential and deterministic; distinct calls share no mutable state.

namespace equiflow {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Commodity {
  int trip = 0;  // index into the scenario trip table
  int origin = 0;
  int destination = 0;
  int mode = 0;  // index into the mode list
  double demand = 0.0;  // veh/h, > 0
};

struct NonCompliantDemand {
  int trip = 0;
  int level = 0;  // cognition level in {0..L}
  double rate = 0.0;  // veh/h, >= 0
};

/// Single-path route taken by all level-l non-compliant vehicles of a trip.
struct PathAssignment {
  int trip = 0;
  int level = 0;
  double rate = 0.0;
  std::vector<int> edges;  // edge indices in travel order
};

struct FlowField {
  std::vector<std::vector<double>> x;  // [commodity][edge] vehicle flow
  std::vector<double> x_total;         // [edge], occupancy-weighted aggregate
  std::vector<double> q_total;         // [edge], non-compliant aggregate
  std::vector<std::vector<double>> q_per_trip;  // [trip][edge]
  std::vector<PathAssignment> q_paths;          // per (level, trip); empty for Wardrop
};

struct AssignmentResult {
  FlowField flows;
  EdgeTimes edge_times;            // t(x_total + background q)
  std::vector<double> avg_times;   // per commodity, flow-weighted [min]
  double objective = 0.0;
  int iterations = 0;
  double relative_gap = 0.0;
  bool converged = true;
  std::vector<double> objective_history;
};

struct NonCompliantResult {
  std::vector<double> q_total;
  std::vector<std::vector<double>> q_per_trip;  // [trip][edge]
  std::vector<PathAssignment> paths;            // cognitive hierarchy only
  int iterations = 0;
  double relative_gap = 0.0;
  bool converged = true;
};

struct SolverOptions {
  double tolerance = 1e-4;        // relative duality gap
  int max_iterations = 500;
  double line_search_tolerance = 1e-8;  // golden-section interval width

  bool operator==(const SolverOptions&) const = default;
};

/// Occupancy-weighted per-edge aggregate of compliant commodity flows.
inline std::vector<double> aggregate_flow(const std::vector<std::vector<double>>& x,
                                          const std::vector<Commodity>& commodities,
                                          const std::vector<ModeSpec>& modes,
                                          int num_edges) {
  std::vector<double> total(num_edges, 0.0);
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    const double h = modes[commodities[c].mode].occupancy;
    for (int e = 0; e < num_edges; ++e) total[e] += h * x[c][e];
  }
  return total;
}

namespace detail {

inline double golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Groups commodity indices by (mode, origin) so all-or-nothing assignments
// share one shortest-path tree. Ordered map keeps iteration deterministic.
inline std::map<std::pair<int, int>, std::vector<int>> group_by_mode_origin(
    const std::vector<Commodity>& commodities) {
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (int c = 0; c < static_cast<int>(commodities.size()); ++c)
    groups[{commodities[c].mode, commodities[c].origin}].push_back(c);
  return groups;
}

}  // namespace detail

/// System-centric routing: minimizes the occupancy-coupled, mode-weighted
/// total travel time of compliant flows against a fixed non-compliant
/// background, by Frank-Wolfe with all-or-nothing Dijkstra directions and
/// golden-section line search. Flow conservation holds by construction.
inline AssignmentResult solve_system_centric(const Graph& g,
                                             const std::vector<Commodity>& commodities,
                                             const std::vector<ModeSpec>& modes,
                                             const std::vector<double>& background_q,
                                             const SolverOptions& opts = {}) {
  const int num_edges = g.num_edges();
  if (static_cast<int>(background_q.size()) != num_edges)
    throw std::invalid_argument("solve_system_centric: background size mismatch");
  double weight_sum = 0.0;
  for (const ModeSpec& m : modes) {
    if (m.weight < 0.0)
      throw std::invalid_argument("solve_system_centric: negative mode weight");
    weight_sum += m.weight;
  }
  if (weight_sum <= 0.0) throw std::invalid_argument("solve_system_centric: all weights zero");
  {
    std::vector<TripRef> refs;
    refs.reserve(commodities.size());
    for (const Commodity& c : commodities) refs.push_back({c.origin, c.destination});
    const auto report = validate_connectivity(g, refs);
    if (!report.ok())
      throw SolverError("solve_system_centric: disconnected trip (" +
                        std::to_string(report.disconnected[0].origin) + " -> " +
                        std::to_string(report.disconnected[0].destination) + ")");
  }

  AssignmentResult result;
  auto& x = result.flows.x;
  x.assign(commodities.size(), std::vector<double>(num_edges, 0.0));

  const auto groups = detail::group_by_mode_origin(commodities);

  // Occupancy- and weight-weighted aggregates; the objective is sum_e t_e * S_e.
  auto aggregates = [&](const std::vector<std::vector<double>>& flows) {
    std::vector<double> load(num_edges, 0.0), weighted(num_edges, 0.0);
    for (std::size_t c = 0; c < commodities.size(); ++c) {
      const ModeSpec& m = modes[commodities[c].mode];
      for (int e = 0; e < num_edges; ++e) {
        load[e] += m.occupancy * flows[c][e];
        weighted[e] += m.weight * flows[c][e];
      }
    }
    return std::pair(load, weighted);
  };

  // All-or-nothing assignment under per-mode edge costs. Returns the flows
  // and the total linearized cost sum_c cost_mode(c) . y_c.
  auto all_or_nothing = [&](const std::vector<EdgeTimes>& mode_costs) {
    std::vector<std::vector<double>> y(commodities.size(),
                                       std::vector<double>(num_edges, 0.0));
    double linearized = 0.0;
    for (const auto& [key, members] : groups) {
      const auto tree = shortest_path_tree(g, mode_costs[key.first], key.second);
      for (int c : members) {
        const Commodity& cm = commodities[c];
        if (tree.dist[cm.destination] == kInfiniteTime)
          throw SolverError("solve_system_centric: no route for trip " +
                            std::to_string(cm.trip));
        for (int e : extract_path(g, tree, cm.destination)) y[c][e] = cm.demand;
        linearized += cm.demand * tree.dist[cm.destination];
      }
    }
    return std::pair(std::move(y), linearized);
  };

  // Initial feasible point: all-or-nothing on background travel times.
  {
    const EdgeTimes t_bg = loaded_times(g, background_q);
    std::vector<EdgeTimes> costs(modes.size(), t_bg);
    x = all_or_nothing(costs).first;
  }

  double objective = 0.0;
  double rel_gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    auto [load, weighted] = aggregates(x);
    EdgeTimes t(num_edges), marginal_base(num_edges);
    objective = 0.0;
    for (int e = 0; e < num_edges; ++e) {
      const double z = load[e] + background_q[e];
      t[e] = bpr_travel_time(g.edge(e), z);
      marginal_base[e] = bpr_travel_time_derivative(g.edge(e), z) * weighted[e];
      objective += t[e] * weighted[e];
    }
    result.objective_history.push_back(objective);

    // Marginal cost of one more mode-m vehicle on edge e:
    //   w_m t_e + h_m t'_e sum_{m',n'} w_{m'} x_e.
    // Direction-finding floors each mode's own-time weight at 1% of the
    // total weight: a zero-weight mode's time is otherwise free to the
    // objective and its vehicles would be sent on unboundedly long
    // detours whenever that sheds any congestion off weighted modes. The
    // floor scales with the weights, so positive homogeneity is exact.
    std::vector<EdgeTimes> costs(modes.size(), EdgeTimes(num_edges));
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const double w_eff = std::max(modes[m].weight, 0.01 * weight_sum);
      for (int e = 0; e < num_edges; ++e)
        costs[m][e] = w_eff * t[e] + modes[m].occupancy * marginal_base[e];
    }

    auto [y, linearized_y] = all_or_nothing(costs);
    double linearized_x = 0.0;
    for (std::size_t c = 0; c < commodities.size(); ++c) {
      const auto& cost = costs[commodities[c].mode];
      for (int e = 0; e < num_edges; ++e) linearized_x += cost[e] * x[c][e];
    }
    const double gap = linearized_x - linearized_y;
    rel_gap = gap / std::max(std::abs(objective), 1e-30);
    if (rel_gap < opts.tolerance) break;

    auto [load_y, weighted_y] = aggregates(y);
    auto restricted = [&](double theta) {
      double value = 0.0;
      for (int e = 0; e < num_edges; ++e) {
        const double z = load[e] + theta * (load_y[e] - load[e]) + background_q[e];
        const double s = weighted[e] + theta * (weighted_y[e] - weighted[e]);
        value += bpr_travel_time(g.edge(e), z) * s;
      }
      return value;
    };
    const double theta =
        detail::golden_section_minimize(restricted, 0.0, 1.0, opts.line_search_tolerance);
    for (std::size_t c = 0; c < commodities.size(); ++c)
      for (int e = 0; e < num_edges; ++e) x[c][e] += theta * (y[c][e] - x[c][e]);
  }

  result.iterations = std::min(iter, opts.max_iterations);
  result.converged = rel_gap < opts.tolerance;
  result.relative_gap = rel_gap;
  result.objective = objective;
  result.flows.x_total = aggregate_flow(x, commodities, modes, num_edges);
  {
    std::vector<double> z = result.flows.x_total;
    for (int e = 0; e < num_edges; ++e) z[e] += background_q[e];
    result.edge_times = loaded_times(g, z);
  }
  result.avg_times.assign(commodities.size(), 0.0);
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    double total = 0.0;
    for (int e = 0; e < num_edges; ++e) total += result.edge_times[e] * x[c][e];
    result.avg_times[c] = total / commodities[c].demand;
  }
  return result;
}

/// Cognitive-hierarchy routing: level-l drivers take the single
/// shortest-time path computed against compliant flow plus all flows of
/// levels below l. Same-level vehicles of a trip share one path.
inline NonCompliantResult solve_cognitive_hierarchy(
    const Graph& g, const std::vector<double>& compliant_total,
    const std::vector<TripRef>& trips, const std::vector<NonCompliantDemand>& demands) {
  const int num_edges = g.num_edges();
  if (static_cast<int>(compliant_total.size()) != num_edges)
    throw std::invalid_argument("solve_cognitive_hierarchy: background size mismatch");

  NonCompliantResult result;
  result.q_total.assign(num_edges, 0.0);
  result.q_per_trip.assign(trips.size(), std::vector<double>(num_edges, 0.0));

  // (level, trip) ascending so each level sees exactly the levels below it.
  std::vector<NonCompliantDemand> ordered;
  for (const NonCompliantDemand& d : demands) {
    if (d.rate < 0.0) throw std::invalid_argument("solve_cognitive_hierarchy: negative rate");
    if (d.trip < 0 || d.trip >= static_cast<int>(trips.size()))
      throw std::invalid_argument("solve_cognitive_hierarchy: bad trip index");
    if (d.rate > 0.0) ordered.push_back(d);
  }
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.level, a.trip) < std::tie(b.level, b.trip);
  });

  std::vector<double> lower_levels(num_edges, 0.0);  // q of levels < current
  std::size_t i = 0;
  while (i < ordered.size()) {
    const int level = ordered[i].level;
    std::vector<double> z(num_edges);
    for (int e = 0; e < num_edges; ++e) z[e] = compliant_total[e] + lower_levels[e];
    const EdgeTimes t = loaded_times(g, z);
    std::map<int, ShortestPathTree> trees;  // by origin, within this level
    std::vector<double> level_flow(num_edges, 0.0);
    for (; i < ordered.size() && ordered[i].level == level; ++i) {
      const NonCompliantDemand& d = ordered[i];
      const TripRef& trip = trips[d.trip];
      auto it = trees.find(trip.origin);
      if (it == trees.end())
        it = trees.emplace(trip.origin, shortest_path_tree(g, t, trip.origin)).first;
      if (it->second.dist[trip.destination] == kInfiniteTime)
        throw SolverError("solve_cognitive_hierarchy: no route for trip " +
                          std::to_string(d.trip));
      PathAssignment path{d.trip, d.level, d.rate,
                          extract_path(g, it->second, trip.destination)};
      for (int e : path.edges) {
        level_flow[e] += d.rate;
        result.q_per_trip[d.trip][e] += d.rate;
      }
      result.paths.push_back(std::move(path));
    }
    for (int e = 0; e < num_edges; ++e) {
      lower_levels[e] += level_flow[e];
      result.q_total[e] += level_flow[e];
    }
  }
  return result;
}

/// Wardrop user equilibrium of the aggregated non-compliant trips against
/// a fixed compliant background: Frank-Wolfe on the shifted Beckmann
/// potential. At convergence all used routes per trip have (near) equal time.
inline NonCompliantResult solve_wardrop(const Graph& g,
                                        const std::vector<TripRef>& trips,
                                        const std::vector<double>& trip_rates,
                                        const std::vector<double>& compliant_total,
                                        const SolverOptions& opts = {}) {
  const int num_edges = g.num_edges();
  if (trip_rates.size() != trips.size())
    throw std::invalid_argument("solve_wardrop: rate count mismatch");
  if (static_cast<int>(compliant_total.size()) != num_edges)
    throw std::invalid_argument("solve_wardrop: background size mismatch");

  std::vector<int> active;  // trips with positive rate
  for (int n = 0; n < static_cast<int>(trips.size()); ++n) {
    if (trip_rates[n] < 0.0) throw std::invalid_argument("solve_wardrop: negative rate");
    if (trip_rates[n] > 0.0) active.push_back(n);
  }
  NonCompliantResult result;
  result.q_total.assign(num_edges, 0.0);
  result.q_per_trip.assign(trips.size(), std::vector<double>(num_edges, 0.0));
  if (active.empty()) return result;
  {
    std::vector<TripRef> refs;
    for (int n : active) refs.push_back(trips[n]);
    const auto report = validate_connectivity(g, refs);
    if (!report.ok())
      throw SolverError("solve_wardrop: disconnected trip (" +
                        std::to_string(report.disconnected[0].origin) + " -> " +
                        std::to_string(report.disconnected[0].destination) + ")");
  }

  auto& q = result.q_per_trip;

  std::map<int, std::vector<int>> by_origin;
  for (int n : active) by_origin[trips[n].origin].push_back(n);

  auto all_or_nothing = [&](const EdgeTimes& t) {
    std::vector<std::vector<double>> y(trips.size(), std::vector<double>(num_edges, 0.0));
    double linearized = 0.0;
    for (const auto& [origin, members] : by_origin) {
      const auto tree = shortest_path_tree(g, t, origin);
      for (int n : members) {
        for (int e : extract_path(g, tree, trips[n].destination)) y[n][e] = trip_rates[n];
        linearized += trip_rates[n] * tree.dist[trips[n].destination];
      }
    }
    return std::pair(std::move(y), linearized);
  };

  auto total_of = [&](const std::vector<std::vector<double>>& flows) {
    std::vector<double> total(num_edges, 0.0);
    for (int n : active)
      for (int e = 0; e < num_edges; ++e) total[e] += flows[n][e];
    return total;
  };

  q = all_or_nothing(loaded_times(g, compliant_total)).first;

  double rel_gap = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (iter = 1; iter <= opts.max_iterations; ++iter) {
    const std::vector<double> q_total = total_of(q);
    std::vector<double> z(num_edges);
    for (int e = 0; e < num_edges; ++e) z[e] = compliant_total[e] + q_total[e];
    const EdgeTimes t = loaded_times(g, z);
    auto [y, shortest_cost] = all_or_nothing(t);
    double current_cost = 0.0;
    for (int e = 0; e < num_edges; ++e) current_cost += t[e] * q_total[e];
    rel_gap = (current_cost - shortest_cost) / std::max(current_cost, 1e-30);
    if (rel_gap < opts.tolerance) break;

    const std::vector<double> y_total = total_of(y);
    auto beckmann = [&](double theta) {
      double value = 0.0;
      for (int e = 0; e < num_edges; ++e) {
        const double flow = compliant_total[e] + q_total[e] + theta * (y_total[e] - q_total[e]);
        value += bpr_integral(g.edge(e), flow);
      }
      return value;
    };
    const double theta =
        detail::golden_section_minimize(beckmann, 0.0, 1.0, opts.line_search_tolerance);
    for (int n : active)
      for (int e = 0; e < num_edges; ++e) q[n][e] += theta * (y[n][e] - q[n][e]);
  }

  result.iterations = std::min(iter, opts.max_iterations);
  result.converged = rel_gap < opts.tolerance;
  result.relative_gap = rel_gap;
  result.q_total = total_of(q);
  return result;
}

enum class NonCompliantModel { kCognitiveHierarchy, kWardrop };

struct EquilibrateOptions {
  int rounds = 2;  // alternations of the two solvers
  double flow_tolerance = 1e-6;  // early stop on max per-edge aggregate change
  NonCompliantModel model = NonCompliantModel::kCognitiveHierarchy;
  SolverOptions solver;
};

struct EquilibrateResult {
  AssignmentResult compliant;
  NonCompliantResult noncompliant;
  int rounds_executed = 0;
  double final_change = 0.0;  // max per-edge aggregate change in the last round
  EdgeTimes final_times;      // t(x_total + q_total) at the returned iterates
};

/// Alternates system-centric routing (against the current non-compliant
/// flows) with the selected non-compliant model (against the current
/// compliant flows). Round 1 solves the system problem with q = 0.
inline EquilibrateResult equilibrate(const Graph& g,
                                     const std::vector<Commodity>& commodities,
                                     const std::vector<ModeSpec>& modes,
                                     const std::vector<TripRef>& trips,
                                     const std::vector<NonCompliantDemand>& nc_demands,
                                     const EquilibrateOptions& opts = {}) {
  if (opts.rounds < 1) throw std::invalid_argument("equilibrate: rounds must be >= 1");
  const int num_edges = g.num_edges();

  std::vector<double> wardrop_rates(trips.size(), 0.0);
  bool any_nc = false;
  for (const NonCompliantDemand& d : nc_demands) {
    wardrop_rates[d.trip] += d.rate;
    if (d.rate > 0.0) any_nc = true;
  }

  EquilibrateResult result;
  result.compliant.flows.x_total.assign(num_edges, 0.0);
  result.compliant.edge_times = free_flow_times(g);
  result.noncompliant.q_total.assign(num_edges, 0.0);
  result.noncompliant.q_per_trip.assign(trips.size(), std::vector<double>(num_edges, 0.0));

  std::vector<double> q(num_edges, 0.0);
  std::vector<double> previous_total(num_edges, 0.0);
  double change = 0.0;
  for (int round = 1; round <= opts.rounds; ++round) {
    if (!commodities.empty())
      result.compliant = solve_system_centric(g, commodities, modes, q, opts.solver);
    if (any_nc) {
      result.noncompliant =
          opts.model == NonCompliantModel::kCognitiveHierarchy
              ? solve_cognitive_hierarchy(g, result.compliant.flows.x_total, trips,
                                          nc_demands)
              : solve_wardrop(g, trips, wardrop_rates, result.compliant.flows.x_total,
                              opts.solver);
      q = result.noncompliant.q_total;
    }
    std::vector<double> total(num_edges);
    change = 0.0;
    for (int e = 0; e < num_edges; ++e) {
      total[e] = result.compliant.flows.x_total[e] + q[e];
      change = std::max(change, std::abs(total[e] - previous_total[e]));
    }
    previous_total = std::move(total);
    result.rounds_executed = round;
    if (round >= 2 && change < opts.flow_tolerance) break;
  }
  result.final_change = change;
  result.final_times = loaded_times(g, previous_total);
  return result;
}

struct OdTravelTimes {
  std::vector<double> compliant;      // [commodity], flow-weighted average [min]
  std::vector<double> nc_path_times;  // aligned with FlowField q_paths (CH)
  std::vector<double> nc_per_trip;    // [trip], rate-weighted; NaN without demand
};

/// Average origin-destination travel times at the coupled final loads:
/// flow-weighted edge sums for compliant commodities, assigned-path times
/// for the cognitive hierarchy, flow-weighted times under Wardrop.
inline OdTravelTimes od_travel_times(const Graph& g, const EquilibrateResult& eq,
                                     const std::vector<Commodity>& commodities,
                                     const std::vector<TripRef>& trips) {
  const EdgeTimes& t = eq.final_times;
  OdTravelTimes out;
  out.compliant.assign(commodities.size(), 0.0);
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    double total = 0.0;
    for (int e = 0; e < g.num_edges(); ++e) total += t[e] * eq.compliant.flows.x[c][e];
    out.compliant[c] = total / commodities[c].demand;
  }

  const NonCompliantResult& nc = eq.noncompliant;
  out.nc_per_trip.assign(trips.size(), std::numeric_limits<double>::quiet_NaN());
  if (!nc.paths.empty()) {
    std::vector<double> rate_sum(trips.size(), 0.0), time_sum(trips.size(), 0.0);
    for (const PathAssignment& path : nc.paths) {
      double path_time = 0.0;
      for (int e : path.edges) path_time += t[e];
      out.nc_path_times.push_back(path_time);
      rate_sum[path.trip] += path.rate;
      time_sum[path.trip] += path.rate * path_time;
    }
    for (std::size_t n = 0; n < trips.size(); ++n)
      if (rate_sum[n] > 0.0) out.nc_per_trip[n] = time_sum[n] / rate_sum[n];
  } else {
    for (std::size_t n = 0; n < trips.size(); ++n) {
      double rate = 0.0, total = 0.0;
      for (int e = 0; e < g.num_edges(); ++e) {
        total += t[e] * nc.q_per_trip[n][e];
      }
      // Recover the trip rate from flow out of the origin.
      for (int e : g.out_edges(trips[n].origin)) rate += nc.q_per_trip[n][e];
      if (rate > 0.0) out.nc_per_trip[n] = total / rate;
    }
  }
  return out;
}

/// Demand-weighted mean travel time of compliant private vehicles minus
/// that of non-compliant vehicles.
inline double delta_pv(const OdTravelTimes& times,
                       const std::vector<Commodity>& commodities,
                       const std::vector<ModeSpec>& modes,
                       const std::vector<NonCompliantDemand>& nc_demands) {
  double compliant_demand = 0.0, compliant_time = 0.0;
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    if (modes[commodities[c].mode].compliance != ComplianceClass::kSplittablePrivate)
      continue;
    compliant_demand += commodities[c].demand;
    compliant_time += commodities[c].demand * times.compliant[c];
  }
  if (compliant_demand <= 0.0)
    throw std::domain_error("delta_pv: no compliant private vehicles");

  std::vector<double> trip_rates(times.nc_per_trip.size(), 0.0);
  for (const NonCompliantDemand& d : nc_demands) trip_rates[d.trip] += d.rate;
  double nc_rate = 0.0, nc_time = 0.0;
  for (std::size_t n = 0; n < trip_rates.size(); ++n) {
    if (trip_rates[n] <= 0.0) continue;
    nc_rate += trip_rates[n];
    nc_time += trip_rates[n] * times.nc_per_trip[n];
  }
  if (nc_rate <= 0.0) throw std::domain_error("delta_pv: no non-compliant vehicles");
  return compliant_time / compliant_demand - nc_time / nc_rate;
}

/// Max absolute node imbalance of a per-edge flow that should route
/// `demand` from origin to destination. Zero for a conserved flow.
inline double conservation_violation(const Graph& g, const std::vector<double>& flow,
                                     int origin, int destination, double demand) {
  std::vector<double> net(g.num_nodes(), 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    net[g.edge(e).tail] += flow[e];
    net[g.edge(e).head] -= flow[e];
  }
  net[origin] -= demand;
  net[destination] += demand;
  double worst = 0.0;
  for (double v : net) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace equiflow
