#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ewls {

// Holding cost per (unit x time) is 2H, so a SOSI interval T costs K/T + H*T per time.
struct Commodity {
  int id = 0;
  double K = 0.0;
  double H = 0.0;
  double gamma = 0.0;
};

class Instance {
 public:
  Instance(double capacity, std::vector<Commodity> commodities);

  double capacity() const { return capacity_; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  std::size_t size() const { return commodities_.size(); }
  const Commodity& by_id(int id) const;
  bool contains(int id) const { return index_.count(id) != 0; }
  std::vector<int> ids() const;

  Instance with_capacity(double capacity) const { return Instance(capacity, commodities_); }
  Instance subset(const std::vector<int>& ids) const;

 private:
  double capacity_;
  std::vector<Commodity> commodities_;
  std::unordered_map<int, std::size_t> index_;
};

struct SosiPolicy {
  std::map<int, double> intervals;
  std::map<int, double> phases;  // missing entries mean phase 0

  double phase(int id) const {
    auto it = phases.find(id);
    return it == phases.end() ? 0.0 : it->second;
  }
};

struct Order {
  double time = 0.0;
  double qty = 0.0;
};

struct CyclicPolicy {
  double tau = 0.0;
  std::map<int, std::vector<Order>> schedules;
};

// Independent cyclic components over disjoint commodity sets, run side by side.
// Component cycles need not be commensurate.
struct GluedPolicy {
  std::vector<CyclicPolicy> components;
};

struct RandomizedPolicy {
  std::function<GluedPolicy(std::uint64_t)> sampler;
  std::string description;
};

constexpr double kDemandTol = 1e-9;

// Throws ValueError on any invariant breach. When inst is given, every id must exist.
void validate_policy(const CyclicPolicy& p, const Instance* inst = nullptr);
void validate_sosi(const SosiPolicy& p, const Instance& inst);
// Each instance commodity covered by exactly one component.
void validate_glued(const GluedPolicy& g, const Instance& inst);

struct SosiExpansion {
  int max_multiple = 1 << 20;        // search bound for the joint cycle multiplier
  std::size_t max_orders = 1 << 22;  // cap on total materialized orders
  double rel_tol = 1e-9;
  std::optional<double> horizon;     // approximate mode when set
};

CyclicPolicy sosi_to_cyclic(const SosiPolicy& p, const Instance& inst,
                            const SosiExpansion& opt = {});

// One single-commodity component per interval; exact for any real intervals.
GluedPolicy sosi_to_glued(const SosiPolicy& p);

GluedPolicy glue(std::vector<GluedPolicy> parts);
GluedPolicy as_glued(CyclicPolicy p);

// Times and quantities multiplied by alpha.
CyclicPolicy scale_policy(const CyclicPolicy& p, double alpha);
GluedPolicy scale_policy(const GluedPolicy& p, double alpha);

// Merges components onto one joint cycle when their cycles share a common multiple.
std::optional<CyclicPolicy> merge_components(const GluedPolicy& g, const SosiExpansion& opt = {});

// Orders at the given times with zero-inventory quantities (gap to the next order, cyclically).
std::vector<Order> zio_orders(std::vector<double> times, double tau);

}  // namespace ewls
