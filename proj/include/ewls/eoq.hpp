#pragma once

#include <utility>

#include "ewls/model.hpp"

namespace ewls {

struct EoqSolution {
  double interval = 0.0;
  double cost_rate = 0.0;
  bool binding = false;
};

// K/T + H*T.
double sosi_cost(double K, double H, double T);
inline double sosi_cost(const Commodity& c, double T) { return sosi_cost(c.K, c.H, T); }

EoqSolution optimal_interval(double K, double H);
EoqSolution constrained_interval(double K, double H, double T_max);

// (C(aT) + C(T/a), ((a^2+1)/a) * C(T)); equal for every T > 0.
std::pair<double, double> cost_identity_check(double K, double H, double T, double alpha);

// min(sqrt(K/H), V/gamma).
double capacity_interval(const Commodity& c, double V);

// Sum of C_i at the capacity-constrained single-commodity optima.
double compute_M(const Instance& inst);

struct SanityReport {
  bool degenerate = false;
  std::vector<int> always_infinite;  // ids whose best half-peak is at most eps*V/n
};

// Reported, never enforced.
SanityReport sanity_report(const Instance& inst, double eps);

}  // namespace ewls
