#include "ewls/eoq.hpp"

#include <cmath>
#include <stdexcept>

namespace ewls {

namespace {

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::domain_error(std::string(name) + " must be > 0");
}

}  // namespace

double sosi_cost(double K, double H, double T) { return K / T + H * T; }

EoqSolution optimal_interval(double K, double H) {
  check_positive(K, "K");
  check_positive(H, "H");
  double T = std::sqrt(K / H);
  return {T, sosi_cost(K, H, T), false};
}

EoqSolution constrained_interval(double K, double H, double T_max) {
  check_positive(T_max, "T_max");
  EoqSolution s = optimal_interval(K, H);
  if (T_max < s.interval) s = {T_max, sosi_cost(K, H, T_max), true};
  return s;
}

std::pair<double, double> cost_identity_check(double K, double H, double T, double alpha) {
  check_positive(K, "K");
  check_positive(H, "H");
  check_positive(T, "T");
  check_positive(alpha, "alpha");
  double lhs = sosi_cost(K, H, alpha * T) + sosi_cost(K, H, T / alpha);
  double rhs = (alpha * alpha + 1.0) / alpha * sosi_cost(K, H, T);
  return {lhs, rhs};
}

double capacity_interval(const Commodity& c, double V) {
  return constrained_interval(c.K, c.H, V / c.gamma).interval;
}

double compute_M(const Instance& inst) {
  double M = 0.0;
  for (const auto& c : inst.commodities()) M += sosi_cost(c, capacity_interval(c, inst.capacity()));
  return M;
}

SanityReport sanity_report(const Instance& inst, double eps) {
  SanityReport r;
  double n = static_cast<double>(inst.size());
  for (const auto& c : inst.commodities()) {
    double half_peak = 0.5 * c.gamma * capacity_interval(c, inst.capacity());
    if (half_peak <= eps * inst.capacity() / n) r.always_infinite.push_back(c.id);
  }
  r.degenerate = !r.always_infinite.empty();
  return r;
}

}  // namespace ewls
