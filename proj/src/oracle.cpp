#include "ewls/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

struct Candidate {
  unsigned mask;
  double cost;
  std::vector<double> space;  // gamma * inventory just after each grid point
};

std::vector<Candidate> candidates(const Commodity& c, double tau, int G, int max_orders) {
  std::vector<Candidate> out;
  const double step = tau / G;
  for (unsigned mask = 1; mask < (1u << G); ++mask) {
    int m = std::popcount(mask);
    if (m > max_orders) continue;
    Candidate cand{mask, 0.0, std::vector<double>(G)};
    double sq = 0.0;
    for (int g = 0; g < G; ++g) {
      // next order strictly after g, cyclically
      int d = 1;
      while (!(mask >> ((g + d) % G) & 1u)) ++d;
      cand.space[g] = c.gamma * d * step;
      if (mask >> g & 1u) sq += static_cast<double>(d) * d * step * step;
    }
    cand.cost = c.K * m / tau + 2.0 * c.H * (0.5 * sq / tau);
    out.push_back(std::move(cand));
  }
  return out;
}

std::vector<Order> orders_of(unsigned mask, double tau, int G) {
  std::vector<double> times;
  for (int g = 0; g < G; ++g)
    if (mask >> g & 1u) times.push_back(g * tau / G);
  return zio_orders(times, tau);
}

}  // namespace

OracleResult oracle_opt_cyclic(const Instance& inst, double tau, int G, int max_orders) {
  if (inst.size() > 2) throw SearchSpaceExceeded("oracle supports at most 2 commodities");
  if (G < 1 || G > 12) throw SearchSpaceExceeded("oracle grid must have 1..12 points");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const double cap = inst.capacity() * (1.0 + kCapacityTol);
  const auto& cs = inst.commodities();
  std::vector<std::vector<Candidate>> cand;
  for (const auto& c : cs) cand.push_back(candidates(c, tau, G, max_orders));

  OracleResult best;
  best.cost = std::numeric_limits<double>::infinity();
  auto peak_ok = [&](const Candidate& a, const Candidate* b) {
    for (int g = 0; g < G; ++g)
      if (a.space[g] + (b ? b->space[g] : 0.0) > cap) return false;
    return true;
  };
  unsigned best_a = 0, best_b = 0;
  if (cs.size() == 1) {
    for (const auto& a : cand[0])
      if (a.cost < best.cost && peak_ok(a, nullptr)) {
        best.cost = a.cost;
        best_a = a.mask;
      }
  } else {
    for (const auto& a : cand[0]) {
      if (a.cost >= best.cost) continue;
      for (const auto& b : cand[1])
        if (a.cost + b.cost < best.cost && peak_ok(a, &b)) {
          best.cost = a.cost + b.cost;
          best_a = a.mask;
          best_b = b.mask;
        }
    }
  }
  if (best_a == 0) return best;
  best.found = true;
  best.policy.tau = tau;
  best.policy.schedules[cs[0].id] = orders_of(best_a, tau, G);
  if (cs.size() == 2) best.policy.schedules[cs[1].id] = orders_of(best_b, tau, G);
  return best;
}

EvalReport oracle_integrate_cost(const CyclicPolicy& p, const Instance& inst, int samples) {
  validate_policy(p, &inst);
  EvalReport r;
  std::vector<double> grid;
  for (int s = 0; s <= samples; ++s) grid.push_back(p.tau * s / samples);
  for (const auto& kv : p.schedules)
    for (const auto& o : kv.second) grid.push_back(o.time);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::map<int, std::vector<double>> after;  // inventory just after each grid point
  for (const auto& [id, orders] : p.schedules) {
    const auto& c = inst.by_id(id);
    // Unshifted trajectory J(t) = sum_{t_k <= t} q_k - t; baseline lifts its lowest left limit to 0.
    std::vector<double> before(grid.size()), post(grid.size());
    std::size_t k = 0;
    double cum = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      before[g] = cum - grid[g];
      while (k < orders.size() && orders[k].time <= grid[g]) cum += orders[k++].qty;
      post[g] = cum - grid[g];
    }
    double lowest = std::min(0.0, cum - p.tau);  // left limit at tau
    for (double v : before) lowest = std::min(lowest, v);
    double c0 = std::max(0.0, -lowest - 1e-12);
    double area = 0.0;
    for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
      double h = grid[g + 1] - grid[g];
      area += 0.5 * h * ((post[g] + c0) + (before[g + 1] + c0));
    }
    double ibar = area / p.tau;
    r.avg_inventory[id] = ibar;
    r.ordering_cost_rate += c.K * static_cast<double>(orders.size()) / p.tau;
    r.holding_cost_rate += 2.0 * c.H * ibar;
    for (auto& v : post) v = c.gamma * (v + c0);
    after[id] = std::move(post);
  }
  double vmax = 0.0;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {  // last grid point is tau itself
    double v = 0.0;
    for (const auto& kv : after) v += kv.second[g];
    vmax = std::max(vmax, v);
  }
  r.v_max = vmax;
  r.total_cost_rate = r.ordering_cost_rate + r.holding_cost_rate;
  r.feasible_at = inst.capacity();
  r.feasible = r.v_max <= inst.capacity() * (1.0 + kCapacityTol);
  return r;
}

}  // namespace ewls
