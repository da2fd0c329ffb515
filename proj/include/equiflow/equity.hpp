#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Mobility-index and mobility-equity-metric computation from per-node,
// per-mode travel times and service catalogs. All operations are pure
// functions over immutable inputs.

namespace equiflow {

struct ServiceType {
  std::string id;
  double priority = 0.0;  // dimensionless weight, catalog-wide sum is 1

  bool operator==(const ServiceType&) const = default;
};

enum class ComplianceClass {
  kAlwaysCompliant,   // follows the planner's routes unconditionally
  kSplittablePrivate, // demand splits into compliant / non-compliant shares
};

struct ModeSpec {
  std::string id;
  double cost = 0.0;       // dollars per passenger-mile
  double occupancy = 1.0;  // road-space factor in (0, 1]
  double threshold = 0.0;  // accessibility time threshold [min]
  double weight = 0.0;     // routing priority
  ComplianceClass compliance = ComplianceClass::kAlwaysCompliant;

  bool operator==(const ModeSpec&) const = default;
};

struct NodeProfile {
  int node = 0;
  double population = 0.0;
  double kappa = 0.0;  // price sensitivity
  std::optional<double> income;  // dollars/year, used only to derive kappa

  bool operator==(const NodeProfile&) const = default;
};

/// Per-destination-node, per-service-type counts. Deterministic iteration
/// order (sorted by node id).
class ServiceCatalog {
 public:
  explicit ServiceCatalog(int num_services = 0) : num_services_(num_services) {}

  void set_count(int node, int service, int count) {
    if (count < 0) throw std::invalid_argument("service catalog: negative count");
    if (service < 0 || service >= num_services_)
      throw std::invalid_argument("service catalog: service index out of range");
    auto it = counts_.find(node);
    if (it == counts_.end()) it = counts_.emplace(node, std::vector<int>(num_services_, 0)).first;
    it->second[service] = count;
  }

  int count(int node, int service) const {
    auto it = counts_.find(node);
    return it == counts_.end() ? 0 : it->second[service];
  }

  int num_services() const { return num_services_; }

  std::vector<int> destinations() const {
    std::vector<int> nodes;
    nodes.reserve(counts_.size());
    for (const auto& [node, _] : counts_) nodes.push_back(node);
    return nodes;
  }

  int total_count(int service) const {
    int total = 0;
    for (const auto& [_, counts] : counts_) total += counts[service];
    return total;
  }

  bool operator==(const ServiceCatalog&) const = default;

 private:
  int num_services_;
  std::map<int, std::vector<int>> counts_;
};

/// Travel times [min] indexed by (origin node, mode, destination node).
class TravelTimeTable {
 public:
  TravelTimeTable() = default;
  TravelTimeTable(std::vector<int> origins, std::vector<int> destinations, int num_modes)
      : origins_(std::move(origins)),
        destinations_(std::move(destinations)),
        num_modes_(num_modes),
        times_(origins_.size() * num_modes * destinations_.size(), 0.0) {}

  double& at(int origin_index, int mode, int dest_index) {
    return times_[(static_cast<std::size_t>(origin_index) * num_modes_ + mode) *
                      destinations_.size() + dest_index];
  }
  double at(int origin_index, int mode, int dest_index) const {
    return times_[(static_cast<std::size_t>(origin_index) * num_modes_ + mode) *
                      destinations_.size() + dest_index];
  }

  const std::vector<int>& origins() const { return origins_; }
  const std::vector<int>& destinations() const { return destinations_; }
  int num_modes() const { return num_modes_; }

  int destination_index(int node) const {
    for (int d = 0; d < static_cast<int>(destinations_.size()); ++d)
      if (destinations_[d] == node) return d;
    return -1;
  }

 private:
  std::vector<int> origins_;
  std::vector<int> destinations_;
  int num_modes_ = 0;
  std::vector<double> times_;
};

/// Accessible-service counts indexed by (origin node, mode, service type).
/// Fractional under sigmoid smoothing.
class AccessMatrix {
 public:
  AccessMatrix() = default;
  AccessMatrix(std::vector<int> origins, int num_modes, int num_services)
      : origins_(std::move(origins)),
        num_modes_(num_modes),
        num_services_(num_services),
        sigma_(origins_.size() * num_modes * num_services, 0.0) {}

  double& at(int origin_index, int mode, int service) {
    return sigma_[(static_cast<std::size_t>(origin_index) * num_modes_ + mode) *
                      num_services_ + service];
  }
  double at(int origin_index, int mode, int service) const {
    return sigma_[(static_cast<std::size_t>(origin_index) * num_modes_ + mode) *
                      num_services_ + service];
  }

  const std::vector<int>& origins() const { return origins_; }
  int num_modes() const { return num_modes_; }
  int num_services() const { return num_services_; }

  bool operator==(const AccessMatrix&) const = default;

 private:
  std::vector<int> origins_;
  int num_modes_ = 0;
  int num_services_ = 0;
  std::vector<double> sigma_;
};

/// Threshold indicator smoothing. Sigmoid mode approaches the exact
/// indicator as k grows.
struct SmoothingSpec {
  bool exact = false;
  double k = 0.5;  // per-minute steepness

  static SmoothingSpec Exact() { return {true, 0.0}; }
  static SmoothingSpec Sigmoid(double k) {
    if (!(k > 0.0)) throw std::invalid_argument("smoothing: sigmoid k must be > 0");
    return {false, k};
  }

  bool operator==(const SmoothingSpec&) const = default;
};

/// Within-threshold indicator. Sigmoid mode: 1 - 1/(1 + e^{-k(t - tau)}),
/// evaluated as 1/(1 + e^{k(t - tau)}) so it saturates cleanly to {0, 1}.
inline double indicator(double t, double tau, const SmoothingSpec& smoothing) {
  if (!(tau > 0.0)) throw std::invalid_argument("indicator: threshold must be > 0");
  if (smoothing.exact) return t <= tau ? 1.0 : 0.0;
  return 1.0 / (1.0 + std::exp(smoothing.k * (t - tau)));
}

/// sigma^s_{i,m}: sum over catalog destinations of service counts weighted
/// by the threshold indicator on the (origin, mode, destination) time.
inline AccessMatrix count_accessible(const TravelTimeTable& times,
                                     const ServiceCatalog& catalog,
                                     const std::vector<ModeSpec>& modes,
                                     const SmoothingSpec& smoothing) {
  if (times.num_modes() != static_cast<int>(modes.size()))
    throw std::invalid_argument("count_accessible: mode count mismatch");
  const std::vector<int> dests = catalog.destinations();
  std::vector<int> dest_index(dests.size());
  for (std::size_t d = 0; d < dests.size(); ++d) {
    dest_index[d] = times.destination_index(dests[d]);
    if (dest_index[d] < 0)
      throw std::invalid_argument("count_accessible: no travel time for catalog destination " +
                                  std::to_string(dests[d]));
  }
  AccessMatrix access(times.origins(), static_cast<int>(modes.size()), catalog.num_services());
  for (int i = 0; i < static_cast<int>(times.origins().size()); ++i)
    for (int m = 0; m < static_cast<int>(modes.size()); ++m)
      for (std::size_t d = 0; d < dests.size(); ++d) {
        const double ind = indicator(times.at(i, m, dest_index[d]), modes[m].threshold,
                                     smoothing);
        for (int s = 0; s < catalog.num_services(); ++s)
          access.at(i, m, s) += catalog.count(dests[d], s) * ind;
      }
  return access;
}

/// Per-(mode, service) slice normalization by the maximum over origins.
/// An all-zero slice stays all-zero: an absent service type contributes
/// nothing to the priority-weighted sum.
inline AccessMatrix normalize_access(const AccessMatrix& access) {
  AccessMatrix normalized = access;
  for (int m = 0; m < access.num_modes(); ++m)
    for (int s = 0; s < access.num_services(); ++s) {
      double max_sigma = 0.0;
      for (int i = 0; i < static_cast<int>(access.origins().size()); ++i)
        max_sigma = std::max(max_sigma, access.at(i, m, s));
      if (max_sigma <= 0.0) continue;
      for (int i = 0; i < static_cast<int>(access.origins().size()); ++i)
        normalized.at(i, m, s) = access.at(i, m, s) / max_sigma;
    }
  return normalized;
}

/// Mobility index: sum over modes of e^{-kappa * cost} times the
/// priority-weighted normalized access.
inline double mobility_index(const NodeProfile& profile, const AccessMatrix& normalized,
                             int origin_index, const std::vector<ModeSpec>& modes,
                             const std::vector<ServiceType>& services) {
  if (profile.kappa < 0.0) throw std::invalid_argument("mobility_index: kappa must be >= 0");
  double mi = 0.0;
  for (int m = 0; m < static_cast<int>(modes.size()); ++m) {
    double inner = 0.0;
    for (int s = 0; s < static_cast<int>(services.size()); ++s)
      inner += services[s].priority * normalized.at(origin_index, m, s);
    mi += std::exp(-profile.kappa * modes[m].cost) * inner;
  }
  return mi;
}

/// Population-weighted Gini complement over mobility indices. 1 means
/// uniform MI across all populated nodes.
inline double mem(const std::vector<double>& mi, const std::vector<double>& populations) {
  const std::size_t n = mi.size();
  if (populations.size() != n) throw std::invalid_argument("mem: size mismatch");
  double pop_total = 0.0;
  double weighted_mi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (populations[i] < 0.0) throw std::invalid_argument("mem: negative population");
    if (mi[i] < 0.0) throw std::invalid_argument("mem: negative mobility index");
    pop_total += populations[i];
    weighted_mi += populations[i] * mi[i];
  }
  if (!(pop_total > 0.0)) throw std::domain_error("mem: total population is zero");
  if (!(weighted_mi > 0.0))
    throw std::domain_error("mem: undefined, population-weighted mobility is zero");
  double pairwise = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      pairwise += populations[i] * populations[j] * std::abs(mi[i] - mi[j]);
  return 1.0 - pairwise / (2.0 * pop_total * weighted_mi);
}

/// Capped inverse-ratio mapping from income to price sensitivity:
/// kappa_i = min(kappa0 * max_income / income_i, kappa_max). The
/// highest-income node gets kappa0; poorer nodes are more price sensitive.
inline std::vector<double> kappa_from_income(const std::vector<double>& incomes,
                                             double kappa0, double kappa_max) {
  if (!(kappa0 > 0.0)) throw std::invalid_argument("kappa_from_income: kappa0 must be > 0");
  double max_income = 0.0;
  for (double income : incomes) {
    if (!(income > 0.0))
      throw std::invalid_argument("kappa_from_income: incomes must be positive");
    max_income = std::max(max_income, income);
  }
  std::vector<double> kappa(incomes.size());
  for (std::size_t i = 0; i < incomes.size(); ++i)
    kappa[i] = std::min(kappa0 * max_income / incomes[i], kappa_max);
  return kappa;
}

/// Evaluated MI vector, MEM, and the inputs that shaped them.
struct MemReport {
  std::vector<int> node_ids;  // trip origins, ascending
  std::vector<double> populations;
  std::vector<double> kappas;
  std::vector<double> mi;
  double mem_value = 0.0;
  AccessMatrix access;             // raw sigma
  AccessMatrix normalized_access;  // sigma tilde
  std::vector<double> weights_used;
  SmoothingSpec smoothing;
  std::optional<double> kappa0;    // set when kappa was derived from income
  std::optional<double> kappa_max;
};

}  // namespace equiflow
