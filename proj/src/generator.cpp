#include "ewls/generator.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ewls/errors.hpp"

namespace ewls {

CapacityRegime parse_regime(const std::string& s) {
  if (s == "loose") return CapacityRegime::loose;
  if (s == "tight") return CapacityRegime::tight;
  if (s == "dense-heavy") return CapacityRegime::dense_heavy;
  throw ValueError("capacity_regime", "unknown regime '" + s + "'");
}

std::string regime_name(CapacityRegime r) {
  switch (r) {
    case CapacityRegime::loose: return "loose";
    case CapacityRegime::tight: return "tight";
    case CapacityRegime::dense_heavy: return "dense-heavy";
  }
  return "?";
}

Instance generate_instance(const GenParams& p) {
  if (p.n < 1) throw ValueError("n", "must be >= 1");
  if (!(p.spread >= 0.0)) throw ValueError("spread", "must be >= 0");
  std::mt19937_64 rng(p.seed);
  auto log_uniform = [&](double lo_exp, double hi_exp) {
    return std::pow(10.0, lo_exp + (hi_exp - lo_exp) * unit_draw(rng));
  };
  std::vector<Commodity> cs(p.n);

  if (p.regime == CapacityRegime::dense_heavy) {
    if (p.octaves < 1) throw ValueError("octaves", "must be >= 1");
    std::vector<int> ids(p.n);
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = p.n - 1; i > 0; --i) std::swap(ids[i], ids[rng() % (i + 1)]);
    double V = 0.0;
    for (std::size_t i = 0; i < p.n; ++i) {
      double stratum = (static_cast<double>(i) + unit_draw(rng)) / static_cast<double>(p.n);
      double eoq = std::exp2(p.octaves * stratum);
      double K = log_uniform(-p.spread, p.spread);
      cs[i] = {ids[i], K, K / (eoq * eoq), (1.0 + 0.3 * p.eps * unit_draw(rng)) / eoq};
      V += 0.5 * cs[i].gamma * eoq;
    }
    return Instance(V * (1.0 + 1e-9), std::move(cs));
  }

  double peak = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    double K = log_uniform(-p.spread, p.spread);
    double H = log_uniform(-p.spread, p.spread);
    double gamma = log_uniform(-1.0, 1.0);
    cs[i] = {static_cast<int>(i), K, H, gamma};
    peak += gamma * std::sqrt(K / H);
  }
  double V = p.regime == CapacityRegime::loose ? 2.0 * peak : 0.3 * peak;
  return Instance(V, std::move(cs));
}

}  // namespace ewls
