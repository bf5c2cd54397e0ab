#include "ewls/relaxation.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ewls/eoq.hpp"

namespace ewls {

namespace {

double budget_at(const Instance& inst, double lambda) {
  double s = 0.0;
  for (const auto& c : inst.commodities()) s += c.gamma * std::sqrt(c.K / (c.H + lambda * c.gamma));
  return s;
}

RelaxationSolution finish(const Instance& inst, double lambda, double cap) {
  RelaxationSolution r;
  r.lambda = lambda;
  r.budget_cap = cap;
  for (const auto& c : inst.commodities()) {
    double T = std::sqrt(c.K / (c.H + lambda * c.gamma));
    r.intervals[c.id] = T;
    r.objective += sosi_cost(c, T);
    r.budget_used += c.gamma * T;
  }
  return r;
}

}  // namespace

RelaxationSolution solve_sosi_relaxation(const Instance& inst, std::optional<double> rhs) {
  double cap = rhs.value_or(2.0 * inst.capacity());
  if (!(cap > 0.0)) throw std::domain_error("relaxation rhs must be > 0");
  if (budget_at(inst, 0.0) <= cap) return finish(inst, 0.0, cap);
  double lo = 0.0;
  double hi = 1.0;
  while (budget_at(inst, hi) > cap) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (budget_at(inst, mid) > cap)
      lo = mid;
    else
      hi = mid;
  }
  return finish(inst, hi, cap);
}

RelaxationSolution solve_sosi_dp(const Instance& inst, double eps, std::optional<double> rhs) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must be in (0,1)");
  double cap = rhs.value_or(2.0 * inst.capacity());
  if (!(cap > 0.0)) throw std::domain_error("relaxation rhs must be > 0");
  const auto& cs = inst.commodities();
  const std::size_t n = cs.size();
  const double unit = eps * cap / (2.0 * static_cast<double>(n));
  const auto units = static_cast<std::size_t>(std::floor(cap / unit + 1e-9));
  if (units < n) throw std::domain_error("budget too coarse for one unit per commodity");
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> prev(units + 1, 0.0), cur(units + 1);
  std::vector<std::uint32_t> choice(n * (units + 1), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = cs[i];
    double eoq = optimal_interval(c.K, c.H).interval;
    auto full = static_cast<std::size_t>(std::ceil(c.gamma * eoq / unit));
    std::vector<double> cost(std::min(full, units) + 1, inf);
    for (std::size_t u = 1; u < cost.size(); ++u)
      cost[u] = constrained_interval(c.K, c.H, static_cast<double>(u) * unit / c.gamma).cost_rate;
    for (std::size_t b = 0; b <= units; ++b) {
      double best = inf;
      std::uint32_t arg = 0;
      std::size_t top = std::min(b, cost.size() - 1);
      for (std::size_t u = 1; u <= top; ++u) {
        double v = prev[b - u] + cost[u];
        if (v < best) {
          best = v;
          arg = static_cast<std::uint32_t>(u);
        }
      }
      cur[b] = best;
      choice[i * (units + 1) + b] = arg;
    }
    std::swap(prev, cur);
  }

  RelaxationSolution r;
  r.budget_cap = cap;
  std::size_t b = units;
  double lambda_sum = 0.0;
  int binding = 0;
  for (std::size_t ii = n; ii-- > 0;) {
    const auto& c = cs[ii];
    std::uint32_t u = choice[ii * (units + 1) + b];
    auto s = constrained_interval(c.K, c.H, static_cast<double>(u) * unit / c.gamma);
    r.intervals[c.id] = s.interval;
    r.objective += s.cost_rate;
    r.budget_used += c.gamma * s.interval;
    if (s.binding) {
      lambda_sum += (c.K / (s.interval * s.interval) - c.H) / c.gamma;
      ++binding;
    }
    b -= u;
  }
  r.lambda = binding ? lambda_sum / binding : 0.0;
  return r;
}

}  // namespace ewls
