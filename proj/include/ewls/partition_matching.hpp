#pragma once

#include <climits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ewls/model.hpp"

namespace ewls {

// Label of the residual volume class.
inline constexpr int kInfClass = INT_MAX;

std::string class_name(int ell);

struct MatchingInstance {
  std::vector<int> commodities;
  std::vector<int> classes;
  std::map<std::pair<int, int>, double> weights;    // (id, ell) -> w; absent means no edge
  std::map<std::pair<int, int>, double> intervals;  // (id, ell) -> T_hat, optional
  std::map<int, std::pair<int, int>> degree_bounds; // ell -> [lower, upper]
};

struct MimickingPartition {
  std::map<int, int> assignment;
  std::map<int, double> intervals;
  double total_weight = 0.0;
};

struct EdgeWeight {
  double T_hat = 0.0;
  double w = 0.0;
};

// T_hat = min(sqrt(K/H), 2V / ((1+eps)^(ell-1) gamma)), or min(sqrt(K/H), 2 eps V / (n gamma)) for ell = inf.
EdgeWeight edge_weight(const Commodity& c, int ell, double eps, double V, std::size_t n);

// Min-cost flow with lower bounds; throws InfeasibleMatching.
MimickingPartition solve_b_matching(const MatchingInstance& mi);

// Enumerates every assignment; for cross-checking small instances.
MimickingPartition exhaustive_b_matching(const MatchingInstance& mi);

}  // namespace ewls
