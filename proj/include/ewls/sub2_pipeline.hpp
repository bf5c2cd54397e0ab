#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ewls/evaluator.hpp"
#include "ewls/model.hpp"

namespace ewls {

enum class GuessMode { reference, exhaustive };

struct PipelineConfig {
  double eps = 0.05;
  double delta = 17.0 / 10000.0;
  std::optional<double> sparsity_threshold;  // default 100 ln(1/eps) / eps^4
  std::optional<std::size_t> Q;              // default 20 ln(1/eps) / eps^2
  std::optional<std::size_t> prefix_count;   // Delta; default ceil(log_{1+eps}(125 ln(1/eps) / eps^6))
  double alpha_fallback = 0.875 * 1.0201394465967895;
  double volume_slack = 0.0;                 // added to each class volume, in units of V
  std::size_t ptas_max_commodities = 3;
  double ptas_eps = 0.5;
  std::uint64_t rng_seed = 0;                // xor-ed into every run seed
  GuessMode guess_mode = GuessMode::reference;

  void validate() const;
  double threshold() const;
  std::size_t subgroups() const;
  std::size_t delta_count() const;
};

enum class ClassLabel { prefix_sparse, suffix_sparse, dense };
std::string label_name(ClassLabel l);

struct ClassDecomposition {
  double eps = 0.0;
  double V = 0.0;
  std::size_t n = 0;
  int L = 0;
  std::map<int, std::vector<int>> classes;  // only nonempty; kInfClass for the residual class
  std::map<int, double> avg_space;          // per class, from the reference
  std::map<int, ClassLabel> labels;
  std::map<int, int> class_of;
  double V_S = 0.0;
  double V_D = 0.0;

  std::vector<int> members(ClassLabel l) const;
  double volume(ClassLabel l) const;
};

struct HeavyLightSplit {
  std::vector<int> heavy;
  std::vector<int> light;
  std::vector<std::vector<int>> subgroups;  // round-robin over heavy sorted by id
};

struct BranchResult {
  GluedPolicy policy;
  nlohmann::json diagnostics;
};

struct Sub2Result {
  GluedPolicy policy;
  EvalReport report;
  nlohmann::json diagnostics;
  double reference_cost = 0.0;
};

// Two-approx intervals snapped down onto the harmonic grid tau/m of one joint cycle, zero phases.
// Snapping down keeps it capacity-feasible.
CyclicPolicy build_reference_policy(const Instance& inst, double eps);

// Slab index of gamma * Ibar: ell with value in (V/(1+eps)^ell, V/(1+eps)^(ell-1)], or kInfClass past L.
int volume_class(double space, double V, double eps, int L);
int class_limit(std::size_t n, double eps);

ClassDecomposition decompose_classes(const CyclicPolicy& ref, const Instance& inst, const PipelineConfig& cfg);

// Heavy: gamma T_hat / 2 above 3/4 of the slab top.
HeavyLightSplit split_heavy_light(const Instance& inst, const std::vector<int>& members,
                                  const std::map<int, double>& T_hat, int ell, const PipelineConfig& cfg);

// Independent stream per (seed, class, subgroup).
std::uint64_t stream_seed(std::uint64_t seed, int ell, std::size_t q);

BranchResult run_easy_scenario(const Instance& inst, const PipelineConfig& cfg, const ClassDecomposition& d,
                               const CyclicPolicy& ref);

// Suffix-sparse and dense commodities only; prefix commodities are handled by the caller.
BranchResult run_dense_branch(const Instance& inst, const PipelineConfig& cfg, const ClassDecomposition& d,
                              const CyclicPolicy& ref, std::uint64_t seed);

Sub2Result solve_sub2(const Instance& inst, const PipelineConfig& cfg, std::uint64_t seed);

RandomizedPolicy make_sub2_randomized_policy(const Instance& inst, const PipelineConfig& cfg);

}  // namespace ewls
