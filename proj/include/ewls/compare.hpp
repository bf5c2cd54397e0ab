#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ewls/model.hpp"
#include "ewls/ptas_dp.hpp"
#include "ewls/sub2_pipeline.hpp"

namespace ewls {

struct CompareRow {
  std::string algo;
  std::uint64_t seed = 0;
  double cost = 0.0;
  double lower_bound = 0.0;
  double ratio = 0.0;            // cost / relaxation lower bound
  double reference_ratio = 0.0;  // sub2 only: cost / reference cost
  double vmax_over_V = 0.0;
  double runtime_ms = 0.0;
  bool feasible = false;
  std::string error;
};

struct CompareOptions {
  std::vector<std::string> algos{"two-approx"};
  std::vector<std::uint64_t> seeds{0};
  PipelineConfig sub2;
  double ptas_eps = 0.5;
  std::size_t threads = 0;  // 0 means hardware concurrency
};

// Rows sorted by (seed, algo order as given). Deterministic algos run once, under the first seed.
std::vector<CompareRow> run_compare(const Instance& inst, const CompareOptions& opt);

bool all_feasible(const std::vector<CompareRow>& rows);
std::string rows_to_csv(const std::vector<CompareRow>& rows);
nlohmann::ordered_json rows_to_json(const std::vector<CompareRow>& rows);

}  // namespace ewls
