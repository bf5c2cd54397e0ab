#pragma once

#include "ewls/evaluator.hpp"
#include "ewls/model.hpp"

namespace ewls {

struct OracleResult {
  CyclicPolicy policy;
  double cost = 0.0;
  bool found = false;  // false when no capacity-feasible subset combination exists
};

// Exhaustive ZIO search over subsets of the uniform grid {j * tau / G}. n <= 2, G <= 12.
OracleResult oracle_opt_cyclic(const Instance& inst, double tau, int G, int max_orders);

// Independent trapezoid integration over `samples` points per cycle plus both sides of every jump.
EvalReport oracle_integrate_cost(const CyclicPolicy& p, const Instance& inst, int samples = 100000);

}  // namespace ewls
