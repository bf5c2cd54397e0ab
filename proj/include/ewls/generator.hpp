#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "ewls/model.hpp"

namespace ewls {

enum class CapacityRegime { loose, tight, dense_heavy };

CapacityRegime parse_regime(const std::string& s);
std::string regime_name(CapacityRegime r);

struct GenParams {
  std::uint64_t seed = 1;
  std::size_t n = 2;
  double spread = 1.0;  // K, H log-uniform in [10^-spread, 10^spread]
  CapacityRegime regime = CapacityRegime::loose;
  double eps = 0.05;    // dense-heavy: relative jitter of gamma * EOQ is 0.3 eps
  int octaves = 4;      // dense-heavy: EOQ spread in powers of 2
};

// loose: V = 2 sum gamma T*; tight: V = 0.3 sum gamma T*;
// dense-heavy: gamma_i EOQ_i nearly constant, EOQ stratified in log2 over `octaves`,
// V just above half the summed EOQ peaks so the two-approx reference is barely unbinding.
Instance generate_instance(const GenParams& p);

// Platform-independent draw in [0, 1).
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace ewls
