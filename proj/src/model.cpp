#include "ewls/model.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <set>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ValueError(field, "must be finite and > 0");
}

bool near_integer(double x) {
  double m = std::round(x);
  return m >= 1.0 && std::fabs(x - m) <= 64.0 * DBL_EPSILON * x + 1e-10;
}

// Smallest k*base (k <= bound) that is an integer multiple of every period.
std::optional<double> common_multiple(const std::vector<double>& periods, int bound) {
  double base = *std::max_element(periods.begin(), periods.end());
  for (int k = 1; k <= bound; ++k) {
    double tau = k * base;
    bool ok = true;
    for (double p : periods) {
      if (!near_integer(tau / p)) {
        ok = false;
        break;
      }
    }
    if (ok) return tau;
  }
  return std::nullopt;
}

}  // namespace

Instance::Instance(double capacity, std::vector<Commodity> commodities)
    : capacity_(capacity), commodities_(std::move(commodities)) {
  require_positive(capacity_, "capacity");
  if (commodities_.empty()) throw ValueError("commodities", "at least one commodity required");
  for (std::size_t i = 0; i < commodities_.size(); ++i) {
    const auto& c = commodities_[i];
    std::string at = "commodities[" + std::to_string(i) + "].";
    require_positive(c.K, at + "K");
    require_positive(c.H, at + "H");
    require_positive(c.gamma, at + "gamma");
    if (!index_.emplace(c.id, i).second) throw ValueError(at + "id", "duplicate id");
  }
}

const Commodity& Instance::by_id(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValueError("id", "unknown commodity " + std::to_string(id));
  return commodities_[it->second];
}

std::vector<int> Instance::ids() const {
  std::vector<int> out;
  out.reserve(commodities_.size());
  for (const auto& c : commodities_) out.push_back(c.id);
  return out;
}

Instance Instance::subset(const std::vector<int>& ids) const {
  std::vector<Commodity> cs;
  cs.reserve(ids.size());
  for (int id : ids) cs.push_back(by_id(id));
  return Instance(capacity_, std::move(cs));
}

void validate_policy(const CyclicPolicy& p, const Instance* inst) {
  require_positive(p.tau, "tau");
  for (const auto& [id, orders] : p.schedules) {
    std::string at = "schedules[" + std::to_string(id) + "]";
    if (inst && !inst->contains(id)) throw ValueError(at, "unknown commodity");
    if (orders.empty()) throw ValueError(at, "at least one order required");
    double sum = 0.0;
    for (std::size_t k = 0; k < orders.size(); ++k) {
      const auto& o = orders[k];
      if (!(o.time >= 0.0 && o.time < p.tau)) throw ValueError(at, "order time outside [0, tau)");
      if (k > 0 && !(o.time > orders[k - 1].time))
        throw ValueError(at, "order times not strictly increasing");
      if (!(o.qty > 0.0) || !std::isfinite(o.qty)) throw ValueError(at, "order quantity must be > 0");
      sum += o.qty;
    }
    if (std::fabs(sum - p.tau) > kDemandTol * p.tau) throw ValueError(at, "quantities do not sum to tau");
  }
}

void validate_sosi(const SosiPolicy& p, const Instance& inst) {
  for (const auto& [id, T] : p.intervals) {
    std::string at = "intervals[" + std::to_string(id) + "]";
    if (!inst.contains(id)) throw ValueError(at, "unknown commodity");
    require_positive(T, at);
    double ph = p.phase(id);
    if (!(ph >= 0.0 && ph < T)) throw ValueError("phases[" + std::to_string(id) + "]", "outside [0, T)");
  }
  for (const auto& [id, ph] : p.phases) {
    (void)ph;
    if (!p.intervals.count(id)) throw ValueError("phases[" + std::to_string(id) + "]", "no interval");
  }
}

void validate_glued(const GluedPolicy& g, const Instance& inst) {
  std::set<int> seen;
  for (const auto& c : g.components) {
    validate_policy(c, &inst);
    for (const auto& kv : c.schedules) {
      if (!seen.insert(kv.first).second)
        throw ValueError("components", "commodity " + std::to_string(kv.first) + " in two components");
    }
  }
  for (const auto& c : inst.commodities())
    if (!seen.count(c.id)) throw ValueError("components", "commodity " + std::to_string(c.id) + " missing");
}

CyclicPolicy sosi_to_cyclic(const SosiPolicy& p, const Instance& inst, const SosiExpansion& opt) {
  validate_sosi(p, inst);
  if (p.intervals.empty()) throw ValueError("intervals", "empty policy");
  CyclicPolicy out;
  if (opt.horizon) {
    require_positive(*opt.horizon, "horizon");
    out.tau = *opt.horizon;
    for (const auto& [id, T] : p.intervals) {
      double ph = p.phase(id);
      if (ph >= out.tau) throw ValueError("horizon", "shorter than a phase");
      std::vector<double> times;
      for (std::size_t j = 0;; ++j) {
        double t = ph + static_cast<double>(j) * T;
        if (t >= out.tau) break;
        times.push_back(t);
        if (times.size() > opt.max_orders) throw ValueError("horizon", "too many orders");
      }
      out.schedules[id] = zio_orders(std::move(times), out.tau);
    }
    return out;
  }
  std::vector<double> periods;
  for (const auto& kv : p.intervals) periods.push_back(kv.second);
  auto tau = common_multiple(periods, opt.max_multiple);
  if (!tau) throw IncommensurateIntervals("no common cycle within the configured multiple bound");
  out.tau = *tau;
  std::size_t total = 0;
  for (const auto& [id, T] : p.intervals) {
    auto m = static_cast<std::size_t>(std::llround(out.tau / T));
    total += m;
    if (total > opt.max_orders) throw IncommensurateIntervals("joint cycle needs too many orders");
    double ph = p.phase(id);
    std::vector<Order> orders;
    orders.reserve(m);
    for (std::size_t j = 0; j < m; ++j) orders.push_back({ph + static_cast<double>(j) * T, T});
    out.schedules[id] = std::move(orders);
  }
  return out;
}

GluedPolicy sosi_to_glued(const SosiPolicy& p) {
  GluedPolicy g;
  for (const auto& [id, T] : p.intervals) {
    CyclicPolicy c;
    c.tau = T;
    c.schedules[id] = {{p.phase(id), T}};
    g.components.push_back(std::move(c));
  }
  return g;
}

GluedPolicy glue(std::vector<GluedPolicy> parts) {
  GluedPolicy g;
  for (auto& part : parts)
    for (auto& c : part.components) g.components.push_back(std::move(c));
  return g;
}

GluedPolicy as_glued(CyclicPolicy p) {
  GluedPolicy g;
  g.components.push_back(std::move(p));
  return g;
}

CyclicPolicy scale_policy(const CyclicPolicy& p, double alpha) {
  require_positive(alpha, "alpha");
  CyclicPolicy out;
  out.tau = p.tau * alpha;
  for (const auto& [id, orders] : p.schedules) {
    auto& dst = out.schedules[id];
    dst.reserve(orders.size());
    for (const auto& o : orders) dst.push_back({o.time * alpha, o.qty * alpha});
  }
  return out;
}

GluedPolicy scale_policy(const GluedPolicy& p, double alpha) {
  GluedPolicy out;
  for (const auto& c : p.components) out.components.push_back(scale_policy(c, alpha));
  return out;
}

std::optional<CyclicPolicy> merge_components(const GluedPolicy& g, const SosiExpansion& opt) {
  if (g.components.empty()) return std::nullopt;
  std::vector<double> periods;
  for (const auto& c : g.components) periods.push_back(c.tau);
  auto tau = common_multiple(periods, opt.max_multiple);
  if (!tau) return std::nullopt;
  CyclicPolicy out;
  out.tau = *tau;
  std::size_t total = 0;
  for (const auto& c : g.components) {
    auto reps = static_cast<std::size_t>(std::llround(out.tau / c.tau));
    for (const auto& [id, orders] : c.schedules) {
      total += reps * orders.size();
      if (total > opt.max_orders) return std::nullopt;
      auto& dst = out.schedules[id];
      for (std::size_t r = 0; r < reps; ++r)
        for (const auto& o : orders) dst.push_back({o.time + static_cast<double>(r) * c.tau, o.qty});
    }
  }
  return out;
}

std::vector<Order> zio_orders(std::vector<double> times, double tau) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  std::vector<Order> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    double next = k + 1 < times.size() ? times[k + 1] : times[0] + tau;
    out.push_back({times[k], next - times[k]});
  }
  return out;
}

}  // namespace ewls
