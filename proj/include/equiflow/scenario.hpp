#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "equiflow/assignment.hpp"
#include "equiflow/detail/csv.hpp"
#include "equiflow/equity.hpp"
#include "equiflow/graph.hpp"

// Scenario files, validation, and synthetic scenario generation. A scenario
// directory holds six CSV tables plus config.json for scalars; column names
// and units are fixed:
//   nodes.csv          id,x,y,population,income[,kappa]
//   edges.csv          tail,head,t0_min,capacity_vph
//   services.csv       node_id,service_type,count
//   service_types.csv  type,priority
//   modes.csv          id,cost_per_passenger_mile,occupancy,tau_min,weight,compliance_class
//   trips.csv          origin,destination,mode,demand_vph

namespace equiflow {

inline std::string to_string(ComplianceClass c) {
  return c == ComplianceClass::kAlwaysCompliant ? "always-compliant" : "splittable-private";
}

inline std::string to_string(NonCompliantModel m) {
  return m == NonCompliantModel::kCognitiveHierarchy ? "cognitive-hierarchy" : "wardrop";
}

struct Scenario {
  Graph graph;
  std::vector<ModeSpec> modes;
  std::vector<ServiceType> service_types;
  std::vector<NodeProfile> profiles;  // dense, index == node id
  ServiceCatalog catalog;
  std::vector<TripRef> trips;
  std::vector<std::vector<double>> demand;  // [trip][mode], veh/h, 0 = no demand

  double rho = 0.75;         // compliant share of private demand
  int hierarchy_levels = 2;  // L; levels run 0..L
  std::vector<double> level_shares;  // size L+1 when set; empty = uniform split
  SmoothingSpec smoothing = SmoothingSpec::Sigmoid(0.5);
  double lambda = kInfiniteTime;  // travel-time sacrifice limit [min]
  SolverOptions solver;
  int rounds = 2;  // coupling alternations
  NonCompliantModel nc_model = NonCompliantModel::kCognitiveHierarchy;
  double kappa0 = 1.0;
  double kappa_max = 10.0;
  bool kappa_derived = false;  // kappa computed from incomes at load time

  int mode_index(const std::string& id) const {
    for (int m = 0; m < static_cast<int>(modes.size()); ++m)
      if (modes[m].id == id) return m;
    return -1;
  }

  bool operator==(const Scenario&) const = default;
};

namespace detail {

inline void push_warning(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

inline ComplianceClass parse_compliance(const CsvTable& t, std::size_t row, int col) {
  const std::string& s = t.cell(row, col);
  if (s == "always-compliant") return ComplianceClass::kAlwaysCompliant;
  if (s == "splittable-private") return ComplianceClass::kSplittablePrivate;
  throw ValidationError(t.path, t.line_numbers[row], t.columns[col],
                        "expected 'always-compliant' or 'splittable-private', got '" + s +
                            "'");
}

inline double json_number(const nlohmann::json& j, const std::string& file,
                          const std::string& field) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfiniteTime;
  if (!j.is_number())
    throw ValidationError(file, 0, field, "expected a number (or \"inf\")");
  return j.get<double>();
}

}  // namespace detail

/// Loads and fully validates a scenario directory. Non-fatal issues
/// (rescaled priorities, ignored income column) land in `warnings`.
inline Scenario load_scenario(const std::filesystem::path& dir,
                              std::vector<std::string>* warnings = nullptr) {
  namespace fs = std::filesystem;
  using detail::CsvTable;
  if (!fs::is_directory(dir))
    throw ValidationError(dir.string(), 0, "", "scenario directory does not exist");

  Scenario s;

  // config.json first; kappa derivation depends on it.
  const fs::path config_path = dir / "config.json";
  if (fs::exists(config_path)) {
    std::ifstream in(config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("config.json", 0, "", e.what());
    }
    if (j.contains("rho")) s.rho = detail::json_number(j["rho"], "config.json", "rho");
    if (s.rho < 0.0 || s.rho > 1.0)
      throw ValidationError("config.json", 0, "rho", "must be in [0, 1]");
    if (j.contains("hierarchy_levels")) s.hierarchy_levels = j["hierarchy_levels"].get<int>();
    if (s.hierarchy_levels < 0)
      throw ValidationError("config.json", 0, "hierarchy_levels", "must be >= 0");
    if (j.contains("level_shares")) {
      s.level_shares = j["level_shares"].get<std::vector<double>>();
      if (static_cast<int>(s.level_shares.size()) != s.hierarchy_levels + 1)
        throw ValidationError("config.json", 0, "level_shares",
                              "needs hierarchy_levels + 1 entries");
      double total = 0.0;
      for (double share : s.level_shares) {
        if (share < 0.0)
          throw ValidationError("config.json", 0, "level_shares", "entries must be >= 0");
        total += share;
      }
      if (!(total > 0.0))
        throw ValidationError("config.json", 0, "level_shares", "must sum to > 0");
      if (std::abs(total - 1.0) > 1e-9) {
        detail::push_warning(warnings, "config.json: level_shares rescaled to sum to 1");
        for (double& share : s.level_shares) share /= total;
      }
    }
    if (j.contains("smoothing")) {
      const auto& sm = j["smoothing"];
      const std::string mode = sm.value("mode", "sigmoid");
      if (mode == "exact")
        s.smoothing = SmoothingSpec::Exact();
      else if (mode == "sigmoid")
        s.smoothing = SmoothingSpec::Sigmoid(
            sm.contains("k") ? detail::json_number(sm["k"], "config.json", "smoothing.k")
                             : 0.5);
      else
        throw ValidationError("config.json", 0, "smoothing.mode",
                              "expected 'sigmoid' or 'exact'");
    }
    if (j.contains("lambda"))
      s.lambda = detail::json_number(j["lambda"], "config.json", "lambda");
    if (!(s.lambda > 0.0))
      throw ValidationError("config.json", 0, "lambda", "must be > 0 (or \"inf\")");
    if (j.contains("solver")) {
      const auto& sv = j["solver"];
      if (sv.contains("tolerance")) s.solver.tolerance = sv["tolerance"].get<double>();
      if (sv.contains("max_iterations"))
        s.solver.max_iterations = sv["max_iterations"].get<int>();
      if (sv.contains("line_search_tolerance"))
        s.solver.line_search_tolerance = sv["line_search_tolerance"].get<double>();
    }
    if (j.contains("rounds")) s.rounds = j["rounds"].get<int>();
    if (s.rounds < 1) throw ValidationError("config.json", 0, "rounds", "must be >= 1");
    if (j.contains("noncompliant_model")) {
      const std::string model = j["noncompliant_model"].get<std::string>();
      if (model == "cognitive-hierarchy")
        s.nc_model = NonCompliantModel::kCognitiveHierarchy;
      else if (model == "wardrop")
        s.nc_model = NonCompliantModel::kWardrop;
      else
        throw ValidationError("config.json", 0, "noncompliant_model",
                              "expected 'cognitive-hierarchy' or 'wardrop'");
    }
    if (j.contains("kappa0"))
      s.kappa0 = detail::json_number(j["kappa0"], "config.json", "kappa0");
    if (j.contains("kappa_max"))
      s.kappa_max = detail::json_number(j["kappa_max"], "config.json", "kappa_max");
    if (!(s.kappa0 > 0.0))
      throw ValidationError("config.json", 0, "kappa0", "must be > 0");
    if (!(s.kappa_max >= s.kappa0))
      throw ValidationError("config.json", 0, "kappa_max", "must be >= kappa0");
  }

  // nodes.csv
  const CsvTable nodes = detail::read_csv((dir / "nodes.csv").string(), "nodes.csv");
  const int col_id = nodes.require_column("id");
  const int col_x = nodes.require_column("x");
  const int col_y = nodes.require_column("y");
  const int col_pop = nodes.require_column("population");
  const int col_income = nodes.require_column("income");
  const int col_kappa = nodes.column("kappa");
  std::vector<Node> node_list;
  std::vector<NodeProfile> profiles;
  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    Node node;
    node.id = detail::parse_int(nodes, r, col_id);
    const bool has_x = !nodes.cell(r, col_x).empty();
    const bool has_y = !nodes.cell(r, col_y).empty();
    if (has_x != has_y)
      throw ValidationError("nodes.csv", nodes.line_numbers[r], "x",
                            "x and y must be given together");
    if (has_x) {
      node.x = detail::parse_double(nodes, r, col_x);
      node.y = detail::parse_double(nodes, r, col_y);
      node.has_coords = true;
    }
    NodeProfile profile;
    profile.node = node.id;
    profile.population = detail::parse_double(nodes, r, col_pop);
    if (profile.population < 0.0)
      throw ValidationError("nodes.csv", nodes.line_numbers[r], "population",
                            "must be >= 0");
    if (!nodes.cell(r, col_income).empty())
      profile.income = detail::parse_double(nodes, r, col_income);
    if (col_kappa >= 0) {
      profile.kappa = detail::parse_double(nodes, r, col_kappa);
      if (profile.kappa < 0.0)
        throw ValidationError("nodes.csv", nodes.line_numbers[r], "kappa", "must be >= 0");
    }
    node_list.push_back(node);
    profiles.push_back(profile);
  }
  if (col_kappa >= 0) {
    bool any_income = false;
    for (const NodeProfile& p : profiles) any_income |= p.income.has_value();
    if (any_income)
      detail::push_warning(warnings,
                           "nodes.csv: kappa column present, income ignored for kappa");
  } else {
    std::vector<double> incomes;
    for (std::size_t r = 0; r < profiles.size(); ++r) {
      if (!profiles[r].income)
        throw ValidationError("nodes.csv", nodes.line_numbers[r], "income",
                              "required when the kappa column is absent");
      incomes.push_back(*profiles[r].income);
    }
    std::vector<double> kappa;
    try {
      kappa = kappa_from_income(incomes, s.kappa0, s.kappa_max);
    } catch (const std::invalid_argument& e) {
      throw ValidationError("nodes.csv", 0, "income", e.what());
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) profiles[i].kappa = kappa[i];
    s.kappa_derived = true;
  }

  // edges.csv
  const CsvTable edges = detail::read_csv((dir / "edges.csv").string(), "edges.csv");
  const int col_tail = edges.require_column("tail");
  const int col_head = edges.require_column("head");
  const int col_t0 = edges.require_column("t0_min");
  const int col_cap = edges.require_column("capacity_vph");
  std::vector<Edge> edge_list;
  for (std::size_t r = 0; r < edges.rows.size(); ++r) {
    Edge e;
    e.tail = detail::parse_int(edges, r, col_tail);
    e.head = detail::parse_int(edges, r, col_head);
    e.t0 = detail::parse_double(edges, r, col_t0);
    e.capacity = detail::parse_double(edges, r, col_cap);
    const int n = static_cast<int>(node_list.size());
    if (e.tail < 0 || e.tail >= n)
      throw ValidationError("edges.csv", edges.line_numbers[r], "tail",
                            "unknown node id " + std::to_string(e.tail));
    if (e.head < 0 || e.head >= n)
      throw ValidationError("edges.csv", edges.line_numbers[r], "head",
                            "unknown node id " + std::to_string(e.head));
    if (!(e.t0 > 0.0))
      throw ValidationError("edges.csv", edges.line_numbers[r], "t0_min", "must be > 0");
    if (!(e.capacity > 0.0))
      throw ValidationError("edges.csv", edges.line_numbers[r], "capacity_vph",
                            "must be > 0");
    edge_list.push_back(e);
  }
  try {
    s.graph = Graph(std::move(node_list), std::move(edge_list));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("edges.csv", 0, "", e.what());
  }
  s.profiles = std::move(profiles);
  std::sort(s.profiles.begin(), s.profiles.end(),
            [](const NodeProfile& a, const NodeProfile& b) { return a.node < b.node; });

  // modes.csv
  const CsvTable modes = detail::read_csv((dir / "modes.csv").string(), "modes.csv");
  const int col_mid = modes.require_column("id");
  const int col_cost = modes.require_column("cost_per_passenger_mile");
  const int col_occ = modes.require_column("occupancy");
  const int col_tau = modes.require_column("tau_min");
  const int col_w = modes.require_column("weight");
  const int col_cc = modes.require_column("compliance_class");
  for (std::size_t r = 0; r < modes.rows.size(); ++r) {
    ModeSpec m;
    m.id = modes.cell(r, col_mid);
    if (m.id.empty())
      throw ValidationError("modes.csv", modes.line_numbers[r], "id", "must not be empty");
    if (s.mode_index(m.id) >= 0)
      throw ValidationError("modes.csv", modes.line_numbers[r], "id",
                            "duplicate mode '" + m.id + "'");
    m.cost = detail::parse_double(modes, r, col_cost);
    m.occupancy = detail::parse_double(modes, r, col_occ);
    m.threshold = detail::parse_double(modes, r, col_tau);
    m.weight = detail::parse_double(modes, r, col_w);
    m.compliance = detail::parse_compliance(modes, r, col_cc);
    if (m.cost < 0.0)
      throw ValidationError("modes.csv", modes.line_numbers[r], "cost_per_passenger_mile",
                            "must be >= 0");
    if (!(m.occupancy > 0.0 && m.occupancy <= 1.0))
      throw ValidationError("modes.csv", modes.line_numbers[r], "occupancy",
                            "must be in (0, 1]");
    if (!(m.threshold > 0.0))
      throw ValidationError("modes.csv", modes.line_numbers[r], "tau_min", "must be > 0");
    if (m.weight < 0.0)
      throw ValidationError("modes.csv", modes.line_numbers[r], "weight", "must be >= 0");
    s.modes.push_back(std::move(m));
  }
  if (s.modes.empty()) throw ValidationError("modes.csv", 0, "", "no modes defined");

  // service_types.csv
  const CsvTable types =
      detail::read_csv((dir / "service_types.csv").string(), "service_types.csv");
  const int col_type = types.require_column("type");
  const int col_pri = types.require_column("priority");
  double priority_sum = 0.0;
  for (std::size_t r = 0; r < types.rows.size(); ++r) {
    ServiceType t;
    t.id = types.cell(r, col_type);
    t.priority = detail::parse_double(types, r, col_pri);
    if (t.priority < 0.0)
      throw ValidationError("service_types.csv", types.line_numbers[r], "priority",
                            "must be >= 0");
    for (const ServiceType& existing : s.service_types)
      if (existing.id == t.id)
        throw ValidationError("service_types.csv", types.line_numbers[r], "type",
                              "duplicate type '" + t.id + "'");
    priority_sum += t.priority;
    s.service_types.push_back(std::move(t));
  }
  if (s.service_types.empty())
    throw ValidationError("service_types.csv", 0, "", "no service types defined");
  if (!(priority_sum > 0.0))
    throw ValidationError("service_types.csv", 0, "priority", "priorities sum to zero");
  if (std::abs(priority_sum - 1.0) > 1e-9) {
    detail::push_warning(warnings, "service_types.csv: priorities rescaled to sum to 1");
    for (ServiceType& t : s.service_types) t.priority /= priority_sum;
  }

  // services.csv
  const CsvTable services = detail::read_csv((dir / "services.csv").string(), "services.csv");
  const int col_snode = services.require_column("node_id");
  const int col_stype = services.require_column("service_type");
  const int col_count = services.require_column("count");
  s.catalog = ServiceCatalog(static_cast<int>(s.service_types.size()));
  for (std::size_t r = 0; r < services.rows.size(); ++r) {
    const int node = detail::parse_int(services, r, col_snode);
    if (node < 0 || node >= s.graph.num_nodes())
      throw ValidationError("services.csv", services.line_numbers[r], "node_id",
                            "unknown node id " + std::to_string(node));
    const std::string& type = services.cell(r, col_stype);
    int type_index = -1;
    for (int t = 0; t < static_cast<int>(s.service_types.size()); ++t)
      if (s.service_types[t].id == type) type_index = t;
    if (type_index < 0)
      throw ValidationError("services.csv", services.line_numbers[r], "service_type",
                            "unknown service type '" + type + "'");
    const int count = detail::parse_int(services, r, col_count);
    if (count < 0)
      throw ValidationError("services.csv", services.line_numbers[r], "count",
                            "must be >= 0");
    s.catalog.set_count(node, type_index, count);
  }

  // trips.csv
  const CsvTable trips = detail::read_csv((dir / "trips.csv").string(), "trips.csv");
  const int col_o = trips.require_column("origin");
  const int col_d = trips.require_column("destination");
  const int col_m = trips.require_column("mode");
  const int col_demand = trips.require_column("demand_vph");
  std::set<std::tuple<int, int, int>> seen;
  for (std::size_t r = 0; r < trips.rows.size(); ++r) {
    const int origin = detail::parse_int(trips, r, col_o);
    const int destination = detail::parse_int(trips, r, col_d);
    const std::string& mode_id = trips.cell(r, col_m);
    const double demand = detail::parse_double(trips, r, col_demand);
    if (origin < 0 || origin >= s.graph.num_nodes())
      throw ValidationError("trips.csv", trips.line_numbers[r], "origin",
                            "unknown node id " + std::to_string(origin));
    if (destination < 0 || destination >= s.graph.num_nodes())
      throw ValidationError("trips.csv", trips.line_numbers[r], "destination",
                            "unknown node id " + std::to_string(destination));
    if (origin == destination)
      throw ValidationError("trips.csv", trips.line_numbers[r], "destination",
                            "origin and destination must differ");
    const int mode = s.mode_index(mode_id);
    if (mode < 0)
      throw ValidationError("trips.csv", trips.line_numbers[r], "mode",
                            "unknown mode '" + mode_id + "'");
    if (!(demand > 0.0))
      throw ValidationError("trips.csv", trips.line_numbers[r], "demand_vph",
                            "must be > 0");
    if (!seen.insert({origin, destination, mode}).second)
      throw ValidationError("trips.csv", trips.line_numbers[r], "mode",
                            "duplicate (origin, destination, mode) row");
    int trip = -1;
    for (int n = 0; n < static_cast<int>(s.trips.size()); ++n)
      if (s.trips[n].origin == origin && s.trips[n].destination == destination) trip = n;
    if (trip < 0) {
      trip = static_cast<int>(s.trips.size());
      s.trips.push_back({origin, destination});
      s.demand.emplace_back(s.modes.size(), 0.0);
    }
    s.demand[trip][mode] = demand;
  }

  return s;
}

/// Writes a scenario directory that load_scenario reads back to an equal
/// Scenario. Numbers use shortest-round-trip formatting.
inline void write_scenario(const Scenario& s, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string units =
      "# units: times in minutes, costs in dollars per passenger-mile, flows in vehicles "
      "per hour\n";
  using detail::format_double;

  {
    std::ofstream out(dir / "nodes.csv");
    out << units << "id,x,y,population,income";
    if (!s.kappa_derived) out << ",kappa";
    out << "\n";
    for (int v = 0; v < s.graph.num_nodes(); ++v) {
      const Node& node = s.graph.nodes()[v];
      const NodeProfile& profile = s.profiles[v];
      out << node.id << ",";
      if (node.has_coords) out << format_double(node.x) << "," << format_double(node.y);
      else out << ",";
      out << "," << format_double(profile.population) << ",";
      if (profile.income) out << format_double(*profile.income);
      if (!s.kappa_derived) out << "," << format_double(profile.kappa);
      out << "\n";
    }
  }
  {
    std::ofstream out(dir / "edges.csv");
    out << units << "tail,head,t0_min,capacity_vph\n";
    for (const Edge& e : s.graph.edges())
      out << e.tail << "," << e.head << "," << format_double(e.t0) << ","
          << format_double(e.capacity) << "\n";
  }
  {
    std::ofstream out(dir / "modes.csv");
    out << units << "id,cost_per_passenger_mile,occupancy,tau_min,weight,compliance_class\n";
    for (const ModeSpec& m : s.modes)
      out << m.id << "," << format_double(m.cost) << "," << format_double(m.occupancy)
          << "," << format_double(m.threshold) << "," << format_double(m.weight) << ","
          << to_string(m.compliance) << "\n";
  }
  {
    std::ofstream out(dir / "service_types.csv");
    out << units << "type,priority\n";
    for (const ServiceType& t : s.service_types)
      out << t.id << "," << format_double(t.priority) << "\n";
  }
  {
    std::ofstream out(dir / "services.csv");
    out << units << "node_id,service_type,count\n";
    for (int node : s.catalog.destinations())
      for (int t = 0; t < static_cast<int>(s.service_types.size()); ++t)
        if (s.catalog.count(node, t) > 0)
          out << node << "," << s.service_types[t].id << "," << s.catalog.count(node, t)
              << "\n";
  }
  {
    std::ofstream out(dir / "trips.csv");
    out << units << "origin,destination,mode,demand_vph\n";
    for (std::size_t n = 0; n < s.trips.size(); ++n)
      for (std::size_t m = 0; m < s.modes.size(); ++m)
        if (s.demand[n][m] > 0.0)
          out << s.trips[n].origin << "," << s.trips[n].destination << "," << s.modes[m].id
              << "," << format_double(s.demand[n][m]) << "\n";
  }
  {
    nlohmann::json j;
    j["rho"] = s.rho;
    j["hierarchy_levels"] = s.hierarchy_levels;
    if (!s.level_shares.empty()) j["level_shares"] = s.level_shares;
    j["smoothing"]["mode"] = s.smoothing.exact ? "exact" : "sigmoid";
    if (!s.smoothing.exact) j["smoothing"]["k"] = s.smoothing.k;
    if (s.lambda == kInfiniteTime)
      j["lambda"] = "inf";
    else
      j["lambda"] = s.lambda;
    j["solver"]["tolerance"] = s.solver.tolerance;
    j["solver"]["max_iterations"] = s.solver.max_iterations;
    j["solver"]["line_search_tolerance"] = s.solver.line_search_tolerance;
    j["rounds"] = s.rounds;
    j["noncompliant_model"] = to_string(s.nc_model);
    j["kappa0"] = s.kappa0;
    j["kappa_max"] = s.kappa_max;
    std::ofstream out(dir / "config.json");
    out << j.dump(2) << "\n";
  }
}

/// Deterministic n-by-n grid scenario: randomized free-flow times and
/// capacities, corner (plus, from n >= 4, side-midpoint) origins with
/// populations and center-block destinations holding the service catalog.
/// Incomes fall off from the center. Public transit costs 10% of private.
/// `public_share` sets the public fraction of each trip's demand.
inline Scenario generate_synthetic(unsigned seed, int n, double demand_scale,
                                   double public_share = 0.5) {
  if (n < 2) throw std::invalid_argument("generate_synthetic: grid size must be >= 2");
  if (!(demand_scale > 0.0))
    throw std::invalid_argument("generate_synthetic: demand scale must be > 0");
  if (public_share < 0.0 || public_share > 1.0)
    throw std::invalid_argument("generate_synthetic: public share must be in [0, 1]");

  std::mt19937 rng(seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (rng() * (1.0 / 4294967296.0));
  };

  Scenario s;
  const auto id_of = [n](int row, int col) { return row * n + col; };

  std::vector<Node> nodes;
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      nodes.push_back({id_of(row, col), static_cast<double>(col),
                       static_cast<double>(row), true});

  // Symmetric random t0/capacity per undirected grid link.
  std::vector<Edge> edges;
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) {
      if (col + 1 < n) {
        const double t0 = uniform(2.0, 10.0);
        const double cap = uniform(250.0, 700.0);
        edges.push_back({id_of(row, col), id_of(row, col + 1), t0, cap});
        edges.push_back({id_of(row, col + 1), id_of(row, col), t0, cap});
      }
      if (row + 1 < n) {
        const double t0 = uniform(2.0, 10.0);
        const double cap = uniform(250.0, 700.0);
        edges.push_back({id_of(row, col), id_of(row + 1, col), t0, cap});
        edges.push_back({id_of(row + 1, col), id_of(row, col), t0, cap});
      }
    }
  s.graph = Graph(std::move(nodes), std::move(edges));

  std::set<int> origin_set = {id_of(0, 0), id_of(0, n - 1), id_of(n - 1, 0),
                              id_of(n - 1, n - 1)};
  if (n >= 4) {
    origin_set.insert(id_of(0, n / 2));
    origin_set.insert(id_of(n - 1, n / 2));
    origin_set.insert(id_of(n / 2, 0));
    origin_set.insert(id_of(n / 2, n - 1));
  }
  std::set<int> destination_set;
  if (n % 2 == 1) {
    destination_set.insert(id_of(n / 2, n / 2));
  } else {
    destination_set.insert(id_of(n / 2 - 1, n / 2 - 1));
    destination_set.insert(id_of(n / 2 - 1, n / 2));
    destination_set.insert(id_of(n / 2, n / 2 - 1));
    destination_set.insert(id_of(n / 2, n / 2));
  }

  // Incomes fall off from the center; purchasing power clusters downtown.
  // Manhattan distance keeps corner and mid-side origins distinguishable.
  const double center = (n - 1) / 2.0;
  for (int v = 0; v < n * n; ++v) {
    const double row = v / n, col = v % n;
    const double dist =
        (std::abs(row - center) + std::abs(col - center)) / std::max(2.0 * center, 1.0);
    NodeProfile profile;
    profile.node = v;
    profile.income = (110000.0 - 70000.0 * dist) * uniform(0.85, 1.15);
    s.profiles.push_back(profile);
  }
  for (int origin : origin_set)
    s.profiles[origin].population = std::floor(uniform(2000.0, 10000.0));

  s.service_types = {{"school", 3.0 / 23.0},     {"hospital", 3.0 / 23.0},
                     {"market", 3.0 / 23.0},     {"pharmacy", 3.0 / 23.0},
                     {"restaurant", 2.0 / 23.0}, {"fitness", 2.0 / 23.0},
                     {"park", 2.0 / 23.0},       {"worship", 2.0 / 23.0},
                     {"cafe", 1.0 / 23.0},       {"stadium", 1.0 / 23.0},
                     {"theater", 1.0 / 23.0}};
  s.catalog = ServiceCatalog(static_cast<int>(s.service_types.size()));
  // One service bundle shared by all center destinations; real service
  // clusters carry the same mix, and a common bundle keeps per-type access
  // differences attributable to travel times.
  std::vector<int> bundle;
  for (int t = 0; t < static_cast<int>(s.service_types.size()); ++t)
    bundle.push_back(1 + static_cast<int>(rng() % 6));
  for (int d : destination_set)
    for (int t = 0; t < static_cast<int>(s.service_types.size()); ++t)
      s.catalog.set_count(d, t, bundle[t]);

  s.modes = {{"public", 0.2, 0.8, 18.0, 0.5, ComplianceClass::kAlwaysCompliant},
             {"private", 2.0, 1.0, 12.0, 0.5, ComplianceClass::kSplittablePrivate}};

  // Every origin demands every service destination in both modes, so each
  // (origin, destination) travel time is estimated from routed flow.
  auto add_trip = [&s](int origin, int destination, int mode, double demand) {
    if (demand <= 0.0) return;
    int trip = -1;
    for (int i = 0; i < static_cast<int>(s.trips.size()); ++i)
      if (s.trips[i].origin == origin && s.trips[i].destination == destination) trip = i;
    if (trip < 0) {
      trip = static_cast<int>(s.trips.size());
      s.trips.push_back({origin, destination});
      s.demand.push_back(std::vector<double>(s.modes.size(), 0.0));
    }
    s.demand[trip][mode] += demand;
  };
  // Cars concentrate on the closest destination, transit on the farthest
  // (commuter-corridor style); every destination still draws some of each
  // so all (origin, destination) travel times are flow-estimated.
  for (int origin : origin_set) {
    const int o_row = origin / n, o_col = origin % n;
    std::vector<std::pair<int, int>> ranked;  // (manhattan distance, node)
    for (int d : destination_set)
      if (d != origin)
        ranked.push_back({std::abs(d / n - o_row) + std::abs(d % n - o_col), d});
    std::sort(ranked.begin(), ranked.end());
    const std::size_t count = ranked.size();
    const double total = uniform(200.0, 500.0) * demand_scale;
    for (std::size_t i = 0; i < count; ++i) {
      const double near_frac =
          count == 1 ? 1.0 : (i == 0 ? 0.55 : (i == count - 1 ? 0.1 : 0.35 / (count - 2)));
      const double far_frac =
          count == 1 ? 1.0 : (i == count - 1 ? 0.55 : (i == 0 ? 0.1 : 0.35 / (count - 2)));
      add_trip(origin, ranked[i].second, 0, public_share * total * far_frac);
      add_trip(origin, ranked[i].second, 1, (1.0 - public_share) * total * near_frac);
    }
  }

  // Local private traffic between neighboring origins keeps the periphery
  // loaded; without it the ring roads are free detours.
  {
    std::vector<std::pair<double, int>> ring;  // (angle around center, node)
    for (int origin : origin_set)
      ring.push_back({std::atan2(origin / n - center, origin % n - center), origin});
    std::sort(ring.begin(), ring.end());
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int from = ring[i].second;
      const int to = ring[(i + 1) % ring.size()].second;
      if (from == to) continue;
      add_trip(from, to, 1, uniform(100.0, 250.0) * demand_scale);
    }
  }

  // Derive kappa exactly as load_scenario would.
  std::vector<double> incomes;
  for (const NodeProfile& p : s.profiles) incomes.push_back(*p.income);
  const std::vector<double> kappa = kappa_from_income(incomes, s.kappa0, s.kappa_max);
  for (std::size_t i = 0; i < s.profiles.size(); ++i) s.profiles[i].kappa = kappa[i];
  s.kappa_derived = true;

  return s;
}

}  // namespace equiflow
