#pragma once

#include <map>
#include <utility>

namespace ewls {

// 1 / (sqrt(2) ln 2).
inline constexpr double kPo2Mean = 1.0201394465967895;

struct Po2Outcome {
  double theta = 0.0;
  double base_T_min = 0.0;
  std::map<int, double> rounded;
  std::map<int, std::pair<int, double>> alpha_beta;  // T_hat = 2^(alpha+beta) * T_min
  std::map<int, int> exponent;                       // rounded = 2^(exponent+theta) * T_min
};

Po2Outcome po2_round(const std::map<int, double>& group, double theta);

// Composite Simpson over theta in [-1/2, 1/2], split at the branch point.
// Returns (E[T^theta], E[1/T^theta]) for T_hat inside a group whose minimum is T_hat_min.
std::pair<double, double> po2_expectation_check(double T_hat, double T_hat_min, int panels = 10000);
inline std::pair<double, double> po2_expectation_check(double T_hat) {
  return po2_expectation_check(T_hat, T_hat);
}

}  // namespace ewls
