#include "ewls/po2_rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewls {

namespace {

std::pair<int, double> split_log(double T_hat, double T_min) {
  double r = std::log2(T_hat) - std::log2(T_min);
  if (r < 0.0) r = 0.0;
  double a = std::floor(r);
  double b = r - a;
  if (b >= 1.0) {
    a += 1.0;
    b = 0.0;
  }
  return {static_cast<int>(a), b};
}

template <class F>
double simpson(F f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  if (panels % 2) ++panels;
  double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

}  // namespace

Po2Outcome po2_round(const std::map<int, double>& group, double theta) {
  if (!(theta >= -0.5 && theta <= 0.5)) throw std::domain_error("theta outside [-1/2, 1/2]");
  if (group.empty()) throw std::domain_error("empty po2 group");
  Po2Outcome out;
  out.theta = theta;
  double t_min = group.begin()->second;
  for (const auto& kv : group) {
    if (!(kv.second > 0.0)) throw std::domain_error("po2 interval must be > 0");
    t_min = std::min(t_min, kv.second);
  }
  out.base_T_min = t_min;
  const double log_min = std::log2(t_min);
  for (const auto& [id, T] : group) {
    auto [a, b] = split_log(T, t_min);
    int e = theta >= b - 0.5 ? a : a + 1;
    out.alpha_beta[id] = {a, b};
    out.exponent[id] = e;
    out.rounded[id] = std::exp2(log_min + e + theta);
  }
  return out;
}

std::pair<double, double> po2_expectation_check(double T_hat, double T_hat_min, int panels) {
  if (!(T_hat > 0.0 && T_hat_min > 0.0)) throw std::domain_error("intervals must be > 0");
  auto [a, b] = split_log(T_hat, T_hat_min);
  const double log_min = std::log2(T_hat_min);
  const double cut = b - 0.5;
  auto upper = [&](double th) { return std::exp2(log_min + a + th); };
  auto lower = [&](double th) { return std::exp2(log_min + a + 1 + th); };
  int p_lo = std::max(2, static_cast<int>(std::ceil(panels * (cut + 0.5))));
  int p_hi = std::max(2, static_cast<int>(std::ceil(panels * (0.5 - cut))));
  double mean_T = simpson(lower, -0.5, cut, p_lo) + simpson(upper, cut, 0.5, p_hi);
  double mean_inv = simpson([&](double th) { return 1.0 / lower(th); }, -0.5, cut, p_lo) +
                    simpson([&](double th) { return 1.0 / upper(th); }, cut, 0.5, p_hi);
  return {mean_T, mean_inv};
}

}  // namespace ewls
