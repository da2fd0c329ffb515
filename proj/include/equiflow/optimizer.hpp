#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "equiflow/assignment.hpp"
#include "equiflow/detail/parallel.hpp"
#include "equiflow/equity.hpp"
#include "equiflow/scenario.hpp"

// Outer-loop equity maximization over mode weights, and the parameter
// sweeps (mode weight, compliance rate, demand scale, hierarchy depth).
// Grid points and sweep rows are evaluated independently and merged in
// parameter order, so output is deterministic for any worker count.

namespace equiflow {

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compliant commodities and per-level non-compliant demands implied by a
/// scenario: public transit demand is always compliant; a private trip
/// splits rho compliant / (1 - rho) non-compliant, the latter spread over
/// levels 0..L (uniformly unless level_shares says otherwise).
inline std::pair<std::vector<Commodity>, std::vector<NonCompliantDemand>>
split_demand(const Scenario& s) {
  std::vector<Commodity> commodities;
  std::vector<NonCompliantDemand> nc;
  const int levels = s.hierarchy_levels;
  std::vector<double> shares = s.level_shares;
  if (shares.empty()) shares.assign(levels + 1, 1.0 / (levels + 1));
  for (int n = 0; n < static_cast<int>(s.trips.size()); ++n)
    for (int m = 0; m < static_cast<int>(s.modes.size()); ++m) {
      const double demand = s.demand[n][m];
      if (demand <= 0.0) continue;
      if (s.modes[m].compliance == ComplianceClass::kAlwaysCompliant) {
        commodities.push_back({n, s.trips[n].origin, s.trips[n].destination, m, demand});
        continue;
      }
      const double compliant = s.rho * demand;
      if (compliant > 0.0)
        commodities.push_back({n, s.trips[n].origin, s.trips[n].destination, m, compliant});
      const double noncompliant = (1.0 - s.rho) * demand;
      if (noncompliant > 0.0)
        for (int l = 0; l <= levels; ++l)
          if (shares[l] > 0.0) nc.push_back({n, l, noncompliant * shares[l]});
    }
  return {std::move(commodities), std::move(nc)};
}

struct PipelineResult {
  MemReport report;
  std::optional<double> delta_pv;  // absent when either vehicle class is empty
  EquilibrateResult equilibrium;
  OdTravelTimes od_times;
  std::vector<Commodity> commodities;
  std::vector<NonCompliantDemand> nc_demands;
};

namespace detail {

/// Demand-weighted mean travel time of a commodity subset.
inline std::optional<double> class_mean_time(const std::vector<Commodity>& commodities,
                                             const std::vector<double>& times,
                                             const std::vector<ModeSpec>& modes,
                                             ComplianceClass wanted) {
  double demand = 0.0, weighted = 0.0;
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    if (modes[commodities[c].mode].compliance != wanted) continue;
    demand += commodities[c].demand;
    weighted += commodities[c].demand * times[c];
  }
  if (demand <= 0.0) return std::nullopt;
  return weighted / demand;
}

inline std::optional<double> noncompliant_mean_time(
    const std::vector<NonCompliantDemand>& nc, const OdTravelTimes& times) {
  std::vector<double> rates(times.nc_per_trip.size(), 0.0);
  for (const NonCompliantDemand& d : nc) rates[d.trip] += d.rate;
  double rate = 0.0, weighted = 0.0;
  for (std::size_t n = 0; n < rates.size(); ++n) {
    if (rates[n] <= 0.0) continue;
    rate += rates[n];
    weighted += rates[n] * times.nc_per_trip[n];
  }
  if (rate <= 0.0) return std::nullopt;
  return weighted / rate;
}

}  // namespace detail

/// Full routing-to-equity pipeline at the given mode weights: equilibrate,
/// estimate origin-destination times, count accessible services, and score
/// MI / MEM at the trip origins.
inline PipelineResult evaluate_pipeline(const Scenario& scenario,
                                        const std::vector<double>& weights) {
  if (weights.size() != scenario.modes.size())
    throw std::invalid_argument("evaluate_pipeline: one weight per mode required");
  std::vector<ModeSpec> modes = scenario.modes;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    if (weights[m] < 0.0)
      throw std::invalid_argument("evaluate_pipeline: weights must be >= 0");
    modes[m].weight = weights[m];
  }

  PipelineResult result;
  std::tie(result.commodities, result.nc_demands) = split_demand(scenario);

  EquilibrateOptions opts;
  opts.rounds = scenario.rounds;
  opts.model = scenario.nc_model;
  opts.solver = scenario.solver;
  result.equilibrium = equilibrate(scenario.graph, result.commodities, modes,
                                   scenario.trips, result.nc_demands, opts);
  result.od_times =
      od_travel_times(scenario.graph, result.equilibrium, result.commodities, scenario.trips);

  // Origins under evaluation; destinations needing a travel time.
  std::set<int> origin_set, dest_set;
  for (const TripRef& trip : scenario.trips) {
    origin_set.insert(trip.origin);
    dest_set.insert(trip.destination);
  }
  for (int d : scenario.catalog.destinations()) dest_set.insert(d);
  const std::vector<int> origins(origin_set.begin(), origin_set.end());
  const std::vector<int> destinations(dest_set.begin(), dest_set.end());

  // Baseline: loaded shortest-path times, identical across modes. Trips
  // that carry flow get their class-averaged estimated times instead.
  TravelTimeTable table(origins, destinations, static_cast<int>(modes.size()));
  for (int i = 0; i < static_cast<int>(origins.size()); ++i) {
    const auto tree =
        shortest_path_tree(scenario.graph, result.equilibrium.final_times, origins[i]);
    for (int d = 0; d < static_cast<int>(destinations.size()); ++d)
      for (int m = 0; m < static_cast<int>(modes.size()); ++m)
        table.at(i, m, d) = tree.dist[destinations[d]];
  }
  {
    // Demand-weighted average over the compliant and non-compliant parts.
    std::vector<std::vector<double>> time_sum(
        scenario.trips.size(), std::vector<double>(modes.size(), 0.0));
    std::vector<std::vector<double>> rate_sum = time_sum;
    for (std::size_t c = 0; c < result.commodities.size(); ++c) {
      const Commodity& cm = result.commodities[c];
      time_sum[cm.trip][cm.mode] += cm.demand * result.od_times.compliant[c];
      rate_sum[cm.trip][cm.mode] += cm.demand;
    }
    for (const NonCompliantDemand& d : result.nc_demands) {
      // Non-compliant vehicles are private; attribute their times to every
      // splittable mode of the trip in proportion to that mode's demand.
      for (std::size_t m = 0; m < modes.size(); ++m) {
        if (modes[m].compliance != ComplianceClass::kSplittablePrivate) continue;
        if (scenario.demand[d.trip][m] <= 0.0) continue;
        time_sum[d.trip][m] += d.rate * result.od_times.nc_per_trip[d.trip];
        rate_sum[d.trip][m] += d.rate;
      }
    }
    for (std::size_t n = 0; n < scenario.trips.size(); ++n) {
      const int oi =
          static_cast<int>(std::lower_bound(origins.begin(), origins.end(),
                                            scenario.trips[n].origin) -
                           origins.begin());
      const int di = static_cast<int>(std::lower_bound(destinations.begin(),
                                                       destinations.end(),
                                                       scenario.trips[n].destination) -
                                      destinations.begin());
      for (std::size_t m = 0; m < modes.size(); ++m)
        if (rate_sum[n][m] > 0.0) table.at(oi, m, di) = time_sum[n][m] / rate_sum[n][m];
    }
  }

  MemReport& report = result.report;
  report.access = count_accessible(table, scenario.catalog, modes, scenario.smoothing);
  report.normalized_access = normalize_access(report.access);
  report.node_ids = origins;
  report.weights_used = weights;
  report.smoothing = scenario.smoothing;
  if (scenario.kappa_derived) {
    report.kappa0 = scenario.kappa0;
    report.kappa_max = scenario.kappa_max;
  }
  for (int i = 0; i < static_cast<int>(origins.size()); ++i) {
    const NodeProfile& profile = scenario.profiles[origins[i]];
    report.populations.push_back(profile.population);
    report.kappas.push_back(profile.kappa);
    report.mi.push_back(
        mobility_index(profile, report.normalized_access, i, modes, scenario.service_types));
  }
  report.mem_value = mem(report.mi, report.populations);

  try {
    result.delta_pv = delta_pv(result.od_times, result.commodities, modes, result.nc_demands);
  } catch (const std::domain_error&) {
    result.delta_pv = std::nullopt;  // one class empty; constraint vacuous
  }
  return result;
}

struct WeightGrid {
  int resolution = 21;  // points per axis on the unit simplex
};

/// All weight vectors with components k/(resolution-1) summing to 1,
/// in ascending lexicographic order.
inline std::vector<std::vector<double>> simplex_grid(int num_modes, int resolution) {
  if (resolution < 2) throw std::invalid_argument("simplex_grid: resolution must be >= 2");
  if (num_modes < 1) throw std::invalid_argument("simplex_grid: need at least one mode");
  std::vector<std::vector<double>> points;
  std::vector<int> ticks(num_modes, 0);
  const int total = resolution - 1;
  const std::function<void(int, int)> recurse = [&](int mode, int remaining) {
    if (mode == num_modes - 1) {
      ticks[mode] = remaining;
      std::vector<double> w(num_modes);
      for (int m = 0; m < num_modes; ++m) w[m] = static_cast<double>(ticks[m]) / total;
      points.push_back(std::move(w));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      ticks[mode] = k;
      recurse(mode + 1, remaining - k);
    }
  };
  recurse(0, total);
  return points;
}

struct GridPoint {
  std::vector<double> weights;
  double mem = 0.0;
  std::optional<double> delta_pv;
  bool feasible = false;
};

struct OptimizationResult {
  std::vector<double> best_weights;
  double best_mem = 0.0;
  std::optional<double> best_delta_pv;
  std::vector<GridPoint> table;
};

/// Grid search for the MEM-maximizing mode weights subject to the
/// compliant-private sacrifice limit. Ties break toward smaller delta_pv,
/// then lexicographically smaller weights. A missing delta_pv (no
/// compliant-private or no non-compliant vehicles) satisfies any limit.
inline OptimizationResult maximize_mem(const Scenario& scenario, const WeightGrid& grid,
                                       double lambda, int jobs = 1) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("maximize_mem: lambda must be > 0 (may be infinite)");
  const auto points = simplex_grid(static_cast<int>(scenario.modes.size()), grid.resolution);
  OptimizationResult result;
  result.table.resize(points.size());
  detail::parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
    const PipelineResult pipeline = evaluate_pipeline(scenario, points[i]);
    GridPoint& point = result.table[i];
    point.weights = points[i];
    point.mem = pipeline.report.mem_value;
    point.delta_pv = pipeline.delta_pv;
    point.feasible = !point.delta_pv || *point.delta_pv <= lambda;
  });

  int best = -1;
  auto tie_delta = [](const GridPoint& p) {
    return p.delta_pv ? *p.delta_pv : -std::numeric_limits<double>::infinity();
  };
  for (int i = 0; i < static_cast<int>(result.table.size()); ++i) {
    const GridPoint& p = result.table[i];
    if (!p.feasible) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const GridPoint& b = result.table[best];
    if (p.mem > b.mem ||
        (p.mem == b.mem &&
         (tie_delta(p) < tie_delta(b) ||
          (tie_delta(p) == tie_delta(b) && p.weights < b.weights))))
      best = i;
  }
  if (best < 0) {
    double min_delta = std::numeric_limits<double>::infinity();
    for (const GridPoint& p : result.table)
      if (p.delta_pv) min_delta = std::min(min_delta, *p.delta_pv);
    throw InfeasibleError("maximize_mem: no grid point satisfies lambda = " +
                          std::to_string(lambda) + "; smallest delta_pv found = " +
                          std::to_string(min_delta));
  }
  result.best_weights = result.table[best].weights;
  result.best_mem = result.table[best].mem;
  result.best_delta_pv = result.table[best].delta_pv;
  return result;
}

struct SweepRow {
  double parameter = 0.0;
  double mem = 0.0;
  std::optional<double> delta_pv;
  std::optional<double> t_public;             // class mean travel times [min]
  std::optional<double> t_compliant_private;
  std::optional<double> t_noncompliant;
  std::optional<double> wardrop_distance;  // hierarchy axis
  std::optional<double> improvement;       // demand axis: best MEM - equal-weight MEM
  std::vector<double> best_weights;        // demand axis
};

struct SweepTable {
  std::string axis;
  std::vector<SweepRow> rows;
};

namespace detail {

inline SweepRow row_from_pipeline(double parameter, const Scenario& s,
                                  const PipelineResult& p) {
  SweepRow row;
  row.parameter = parameter;
  row.mem = p.report.mem_value;
  row.delta_pv = p.delta_pv;
  row.t_public = class_mean_time(p.commodities, p.od_times.compliant, s.modes,
                                 ComplianceClass::kAlwaysCompliant);
  row.t_compliant_private = class_mean_time(p.commodities, p.od_times.compliant, s.modes,
                                            ComplianceClass::kSplittablePrivate);
  row.t_noncompliant = noncompliant_mean_time(p.nc_demands, p.od_times);
  return row;
}

// The lone always-compliant mode of a two-mode scenario, for weight sweeps.
inline std::pair<int, int> public_private_pair(const Scenario& s) {
  if (s.modes.size() != 2)
    throw std::invalid_argument("weight sweep requires exactly two modes");
  int pub = -1, priv = -1;
  for (int m = 0; m < 2; ++m)
    (s.modes[m].compliance == ComplianceClass::kAlwaysCompliant ? pub : priv) = m;
  if (pub < 0 || priv < 0)
    throw std::invalid_argument(
        "weight sweep requires one always-compliant and one splittable-private mode");
  return {pub, priv};
}

}  // namespace detail

/// MEM and travel-time gap across the public-transport weight axis,
/// w_private = 1 - w_public.
inline SweepTable sweep_weights(const Scenario& scenario, int steps, int jobs = 1) {
  if (steps < 2) throw std::invalid_argument("sweep_weights: steps must be >= 2");
  const auto [pub, priv] = detail::public_private_pair(scenario);
  SweepTable table;
  table.axis = "weight";
  table.rows.resize(steps);
  detail::parallel_for(steps, jobs, [&, pub = pub, priv = priv](int i) {
    const double w_public = static_cast<double>(i) / (steps - 1);
    std::vector<double> weights(2);
    weights[pub] = w_public;
    weights[priv] = 1.0 - w_public;
    table.rows[i] = detail::row_from_pipeline(
        w_public, scenario, evaluate_pipeline(scenario, weights));
  });
  return table;
}

/// Pipeline evaluation per compliance rate, at the scenario's own weights.
inline SweepTable sweep_compliance(const Scenario& scenario,
                                   const std::vector<double>& rates, int jobs = 1) {
  for (double rho : rates)
    if (rho < 0.0 || rho > 1.0)
      throw std::invalid_argument("sweep_compliance: rates must be in [0, 1]");
  std::vector<double> weights;
  for (const ModeSpec& m : scenario.modes) weights.push_back(m.weight);
  SweepTable table;
  table.axis = "compliance";
  table.rows.resize(rates.size());
  detail::parallel_for(static_cast<int>(rates.size()), jobs, [&](int i) {
    Scenario varied = scenario;
    varied.rho = rates[i];
    table.rows[i] =
        detail::row_from_pipeline(rates[i], varied, evaluate_pipeline(varied, weights));
  });
  return table;
}

/// Per demand scale: the best MEM improvement that weight optimization buys
/// over equal weights, maximized over the given compliance rates.
inline SweepTable sweep_demand_scale(const Scenario& scenario,
                                     const std::vector<double>& scales,
                                     const std::vector<double>& rates,
                                     const WeightGrid& grid = {}, int jobs = 1) {
  if (scales.empty()) throw std::invalid_argument("sweep_demand_scale: no scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0))
      throw std::invalid_argument("sweep_demand_scale: scales must be > 0");
    if (i > 0 && scales[i] <= scales[i - 1])
      throw std::invalid_argument(
          "sweep_demand_scale: scales must be strictly increasing (no duplicates)");
  }
  if (rates.empty()) throw std::invalid_argument("sweep_demand_scale: no rates");
  const std::vector<double> equal(scenario.modes.size(),
                                  1.0 / static_cast<double>(scenario.modes.size()));
  SweepTable table;
  table.axis = "demand";
  table.rows.resize(scales.size());
  detail::parallel_for(static_cast<int>(scales.size()), 1, [&](int i) {
    Scenario scaled = scenario;
    for (auto& trip_demand : scaled.demand)
      for (double& d : trip_demand) d *= scales[i];
    SweepRow row;
    row.parameter = scales[i];
    double best_improvement = -std::numeric_limits<double>::infinity();
    for (double rho : rates) {
      Scenario varied = scaled;
      varied.rho = rho;
      const double baseline = evaluate_pipeline(varied, equal).report.mem_value;
      const OptimizationResult best = maximize_mem(varied, grid, varied.lambda, jobs);
      const double improvement = best.best_mem - baseline;
      if (improvement > best_improvement) {
        best_improvement = improvement;
        row.mem = best.best_mem;
        row.delta_pv = best.best_delta_pv;
        row.best_weights = best.best_weights;
      }
    }
    row.improvement = best_improvement;
    table.rows[i] = row;
  });
  return table;
}

/// Cognitive-hierarchy depth sweep with the distance to a Wardrop solve of
/// the same non-compliant demand against each row's final compliant flows.
inline SweepTable sweep_hierarchy_depth(const Scenario& scenario,
                                        const std::vector<int>& depths, int jobs = 1) {
  if (depths.empty()) throw std::invalid_argument("sweep_hierarchy_depth: no depths");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 0)
      throw std::invalid_argument("sweep_hierarchy_depth: depths must be >= 0");
    if (i > 0 && depths[i] <= depths[i - 1])
      throw std::invalid_argument("sweep_hierarchy_depth: depths must be increasing");
  }
  std::vector<double> weights;
  for (const ModeSpec& m : scenario.modes) weights.push_back(m.weight);
  SweepTable table;
  table.axis = "hierarchy";
  table.rows.resize(depths.size());
  detail::parallel_for(static_cast<int>(depths.size()), jobs, [&](int i) {
    Scenario varied = scenario;
    varied.hierarchy_levels = depths[i];
    varied.level_shares.clear();  // uniform split across 0..L
    varied.nc_model = NonCompliantModel::kCognitiveHierarchy;
    const PipelineResult pipeline = evaluate_pipeline(varied, weights);
    SweepRow row = detail::row_from_pipeline(depths[i], varied, pipeline);

    std::vector<double> trip_rates(varied.trips.size(), 0.0);
    for (const NonCompliantDemand& d : pipeline.nc_demands) trip_rates[d.trip] += d.rate;
    const auto wardrop =
        solve_wardrop(varied.graph, varied.trips, trip_rates,
                      pipeline.equilibrium.compliant.flows.x_total, varied.solver);
    double distance = 0.0;
    for (int e = 0; e < varied.graph.num_edges(); ++e)
      distance = std::max(distance, std::abs(pipeline.equilibrium.noncompliant.q_total[e] -
                                             wardrop.q_total[e]));
    row.wardrop_distance = distance;
    table.rows[i] = row;
  });
  return table;
}

}  // namespace equiflow
