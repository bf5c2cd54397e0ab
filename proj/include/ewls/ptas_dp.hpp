#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ewls/evaluator.hpp"
#include "ewls/model.hpp"

namespace ewls {

// Level q has G^(q-1) coarse intervals (B_q^- points at their starts), each split into S
// fine subintervals (B_q^+ points). Nesting needs G | S and S | G^2.
struct GridSpec {
  double tau = 0.0;
  int levels = 1;  // Q
  int growth = 2;  // G
  int points = 4;  // S

  std::size_t coarse_count(int q) const;
  double coarse_length(int q) const;
  double fine_length(int q) const;
  void validate() const;
};

struct GridOverrides {
  std::optional<int> levels;
  std::optional<int> growth;
  std::optional<int> points;
  std::size_t state_cap = 1000000;
};

struct PtasGuess {
  double tau = 0.0;
  std::vector<int> class_of;  // per instance commodity, 1..Q
};

// Theory-sized grid: c = ceil(n/eps), G = c^3, S = c^5.
GridSpec theory_grid(std::size_t n, double eps, double tau, int levels);
GridSpec resolve_grid(std::size_t n, double eps, double tau, const GridOverrides& o);

std::vector<double> tau_grid(const Instance& inst, double eps);
std::vector<PtasGuess> enumerate_guesses(const Instance& inst, double eps, std::size_t budget, int levels = 2,
                                         std::size_t max_n = 3);

struct DpNode {
  int q = 0;
  double start = 0.0;
  double length = 0.0;
  double lb = 0.0;  // space lower bound for classes <= q-2
};

struct DpResult {
  bool feasible = false;  // false is the infeasible outcome
  CyclicPolicy policy;
  double cost_rate = 0.0;  // DP objective
  GridSpec grid;
  std::size_t states = 0;
  std::vector<DpNode> trace;
};

DpResult dp_solve(const Instance& inst, const PtasGuess& guess, double eps, const GridOverrides& o = {});

// Orders only on fine points of the commodity's level, an order at every coarse point.
bool is_b_aligned(const CyclicPolicy& p, const Instance& inst, const GridSpec& grid,
                  const std::vector<int>& class_of, double tol = 1e-9);

struct PtasOptions {
  int levels = 2;
  std::optional<int> growth;
  std::optional<int> points;
  std::size_t state_cap = 1000000;
  std::size_t guess_budget = 4096;
  std::size_t max_n = 3;
};

// Desk-scale grid sizes by n; explicit fields win.
PtasOptions desk_options(std::size_t n);

struct PtasResult {
  CyclicPolicy policy;
  EvalReport report;
  PtasGuess guess;
  GridSpec grid;
  double dp_cost_rate = 0.0;
  double scale = 1.0;
};

PtasResult ptas_solve(const Instance& inst, double eps, const PtasOptions& opt);
inline PtasResult ptas_solve(const Instance& inst, double eps) { return ptas_solve(inst, eps, desk_options(inst.size())); }

}  // namespace ewls
