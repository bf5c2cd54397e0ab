#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ewls/model.hpp"
#include "ewls/rational.hpp"

namespace ewls {

// T_B <= T_A, T_A / T_B = 2^k, gamma_A T_A / (gamma_B T_B) within (1 +- eps).
struct CoupleInput {
  Commodity a;
  Commodity b;
  double T_A = 0.0;
  double T_B = 0.0;
  double eps = 0.0;
};

using ExactOrders = std::vector<std::pair<Rational, Rational>>;  // (time, qty) in units of T_A

struct CoupleSchedule {
  int case_id = 0;
  int k = 0;
  CyclicPolicy policy;
  Rational claimed_vmax_ratio;  // over gamma_A Ibar_A + gamma_B Ibar_B
  Rational claimed_cost_ratio;  // max per-commodity blow-up
  Rational exact_cycle;         // in units of T_A
  ExactOrders exact_a;
  ExactOrders exact_b;
};

constexpr int kMaxCoupleExponent = 16;

int couple_case(int k);
std::pair<Rational, Rational> claimed_ratios(int case_id);

// Exact normalized schedule (T_A = 1, T_B = 2^-k, equal peak space).
CoupleSchedule normalized_couple(int k);

// Throws NotAPowerOfTwo, SpaceMismatch, or std::length_error when k > max_k.
CoupleSchedule synthesize_couple(const CoupleInput& in, int max_k = kMaxCoupleExponent);

struct GroupEntry {
  int id = 0;
  double gamma = 0.0;
  double T = 0.0;
};

struct PairClassification {
  std::vector<std::pair<int, int>> near;  // (lead, trail) by gamma*T descending
  std::vector<std::pair<int, int>> far;
  std::optional<int> leftover;
};

PairClassification classify_pairs(std::vector<GroupEntry> group, double eps);

}  // namespace ewls
