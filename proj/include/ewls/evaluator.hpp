#pragma once

#include <map>

#include "ewls/model.hpp"

namespace ewls {

struct EvalReport {
  double ordering_cost_rate = 0.0;
  double holding_cost_rate = 0.0;
  double total_cost_rate = 0.0;
  double v_max = 0.0;
  std::map<int, double> avg_inventory;
  double feasible_at = 0.0;
  bool feasible = false;
};

constexpr double kCapacityTol = 1e-9;

// Minimal nonnegative steady-state starting stock I(0-) for one schedule.
double baseline_stock(const std::vector<Order>& orders, double tau);

// Inventory just after any order placed exactly at t; t is reduced modulo tau.
double inventory_at(const CyclicPolicy& p, int id, double t);

// Occupied space just after any order at t.
double space_at(const CyclicPolicy& p, const Instance& inst, double t);

EvalReport evaluate(const CyclicPolicy& p, const Instance& inst);

// Components run independently; v_max is the sum of component peaks, which bounds the
// joint peak for every relative phase and equals it when the cycles are rationally independent.
EvalReport evaluate(const GluedPolicy& p, const Instance& inst);

double average_space(const CyclicPolicy& p, const Instance& inst);
double average_space(const GluedPolicy& p, const Instance& inst);

}  // namespace ewls
