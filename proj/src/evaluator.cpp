#include "ewls/evaluator.hpp"

#include <algorithm>
#include <cmath>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

const std::vector<Order>& schedule_of(const CyclicPolicy& p, int id) {
  auto it = p.schedules.find(id);
  if (it == p.schedules.end()) throw ValueError("id", "commodity " + std::to_string(id) + " not in policy");
  return it->second;
}

double mean_inventory(const std::vector<Order>& orders, double tau, double c0) {
  double area = 0.0;
  double level = c0;
  double prev = 0.0;
  for (const auto& o : orders) {
    double d = o.time - prev;
    area += level * d - 0.5 * d * d;
    level += o.qty - d;
    prev = o.time;
  }
  double d = tau - prev;
  area += level * d - 0.5 * d * d;
  return area / tau;
}

}  // namespace

double baseline_stock(const std::vector<Order>& orders, double tau) {
  (void)tau;
  double cum = 0.0;
  double need = 0.0;
  for (const auto& o : orders) {
    need = std::max(need, o.time - cum);
    cum += o.qty;
  }
  return need;
}

double inventory_at(const CyclicPolicy& p, int id, double t) {
  const auto& orders = schedule_of(p, id);
  t = std::fmod(t, p.tau);
  if (t < 0) t += p.tau;
  double level = baseline_stock(orders, p.tau) - t;
  for (const auto& o : orders) {
    if (o.time > t) break;
    level += o.qty;
  }
  return level;
}

double space_at(const CyclicPolicy& p, const Instance& inst, double t) {
  double v = 0.0;
  for (const auto& kv : p.schedules) v += inst.by_id(kv.first).gamma * inventory_at(p, kv.first, t);
  return v;
}

EvalReport evaluate(const CyclicPolicy& p, const Instance& inst) {
  validate_policy(p, &inst);
  EvalReport r;
  struct Jump {
    double time;
    double space;
  };
  std::vector<Jump> jumps;
  double start_space = 0.0;
  double slope = 0.0;
  for (const auto& [id, orders] : p.schedules) {
    const auto& c = inst.by_id(id);
    double c0 = baseline_stock(orders, p.tau);
    double ibar = mean_inventory(orders, p.tau, c0);
    r.avg_inventory[id] = ibar;
    r.ordering_cost_rate += c.K * static_cast<double>(orders.size()) / p.tau;
    r.holding_cost_rate += 2.0 * c.H * ibar;
    start_space += c.gamma * c0;
    slope += c.gamma;
    for (const auto& o : orders) jumps.push_back({o.time, c.gamma * o.qty});
  }
  std::sort(jumps.begin(), jumps.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
  // V(0) before jumps at 0 never exceeds the value after them.
  double cum = start_space;
  double vmax = start_space;
  std::size_t k = 0;
  while (k < jumps.size()) {
    double t = jumps[k].time;
    while (k < jumps.size() && jumps[k].time == t) cum += jumps[k++].space;
    vmax = std::max(vmax, cum - slope * t);
  }
  r.v_max = vmax;
  r.total_cost_rate = r.ordering_cost_rate + r.holding_cost_rate;
  r.feasible_at = inst.capacity();
  r.feasible = r.v_max <= inst.capacity() * (1.0 + kCapacityTol);
  return r;
}

EvalReport evaluate(const GluedPolicy& p, const Instance& inst) {
  EvalReport r;
  for (const auto& c : p.components) {
    EvalReport part = evaluate(c, inst);
    r.ordering_cost_rate += part.ordering_cost_rate;
    r.holding_cost_rate += part.holding_cost_rate;
    r.v_max += part.v_max;
    for (const auto& kv : part.avg_inventory) r.avg_inventory[kv.first] = kv.second;
  }
  r.total_cost_rate = r.ordering_cost_rate + r.holding_cost_rate;
  r.feasible_at = inst.capacity();
  r.feasible = r.v_max <= inst.capacity() * (1.0 + kCapacityTol);
  return r;
}

double average_space(const CyclicPolicy& p, const Instance& inst) {
  double s = 0.0;
  for (const auto& [id, orders] : p.schedules)
    s += inst.by_id(id).gamma * mean_inventory(orders, p.tau, baseline_stock(orders, p.tau));
  return s;
}

double average_space(const GluedPolicy& p, const Instance& inst) {
  double s = 0.0;
  for (const auto& c : p.components) s += average_space(c, inst);
  return s;
}

}  // namespace ewls
