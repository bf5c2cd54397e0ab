#pragma once

#include <map>
#include <optional>

#include "ewls/model.hpp"

namespace ewls {

// SOSI relaxation: minimize sum C_i(T_i) s.t. sum gamma_i T_i <= cap.
struct RelaxationSolution {
  std::map<int, double> intervals;
  double lambda = 0.0;
  double objective = 0.0;
  double budget_used = 0.0;
  double budget_cap = 0.0;
};

// cap defaults to 2V.
RelaxationSolution solve_sosi_relaxation(const Instance& inst, std::optional<double> rhs = std::nullopt);

// Knapsack over budget units of eps*cap/(2n); objective within (1+eps) of the exact one.
RelaxationSolution solve_sosi_dp(const Instance& inst, double eps, std::optional<double> rhs = std::nullopt);

}  // namespace ewls
