#include <random>

#include "doctest.h"

#include "ewls/errors.hpp"
#include "ewls/evaluator.hpp"
#include "ewls/generator.hpp"
#include "ewls/oracle.hpp"
#include "ewls/relaxation.hpp"

using namespace ewls;

TEST_CASE("single commodity hits the EOQ point on a grid that contains it") {
  Instance inst(10.0, {{0, 1.0, 1.0, 1.0}});
  OracleResult o = oracle_opt_cyclic(inst, 2.0, 4, 4);
  REQUIRE(o.found);
  CHECK(o.cost == doctest::Approx(2.0));
  CHECK(o.policy.schedules.at(0).size() == 2);
}

TEST_CASE("binding capacity forces shorter gaps") {
  Instance inst(0.5, {{0, 1.0, 1.0, 1.0}});
  OracleResult o = oracle_opt_cyclic(inst, 2.0, 4, 4);
  REQUIRE(o.found);
  CHECK(o.cost == doctest::Approx(2.5));
  CHECK(evaluate(o.policy, inst).feasible);
}

TEST_CASE("no feasible grid policy") {
  Instance inst(0.1, {{0, 1.0, 1.0, 1.0}});
  CHECK_FALSE(oracle_opt_cyclic(inst, 2.0, 4, 4).found);
}

TEST_CASE("search limits") {
  Instance three(10.0, {{0, 1, 1, 1}, {1, 1, 1, 1}, {2, 1, 1, 1}});
  CHECK_THROWS_AS(oracle_opt_cyclic(three, 1.0, 4, 4), SearchSpaceExceeded);
  Instance one(10.0, {{0, 1, 1, 1}});
  CHECK_THROWS_AS(oracle_opt_cyclic(one, 1.0, 13, 4), SearchSpaceExceeded);
}

TEST_CASE("relaxation lower bound never exceeds the oracle optimum") {
  for (std::uint64_t s = 1; s <= 30; ++s) {
    GenParams p;
    p.seed = s;
    p.n = 1 + s % 2;
    p.regime = s % 3 ? CapacityRegime::tight : CapacityRegime::loose;
    Instance inst = generate_instance(p);
    double lb = solve_sosi_relaxation(inst).objective;
    double T = 0.0;
    for (const auto& c : inst.commodities()) T = std::max(T, std::sqrt(c.K / c.H));
    OracleResult o = oracle_opt_cyclic(inst, 2.0 * T, 8, 8);
    if (!o.found) continue;
    CHECK(lb <= o.cost + 1e-6);
    EvalReport r = evaluate(o.policy, inst);
    CHECK(r.feasible);
    CHECK(r.total_cost_rate == doctest::Approx(o.cost).epsilon(1e-9));
  }
}

TEST_CASE("independent integration agrees with the closed-form evaluator") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Commodity> cs;
    CyclicPolicy p;
    p.tau = 0.5 + 2.0 * u(rng);
    int n = 1 + trial % 3;
    for (int i = 0; i < n; ++i) {
      cs.push_back({i, 0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng)});
      std::vector<double> times;
      int m = 1 + static_cast<int>(rng() % 5);
      for (int j = 0; j < m; ++j) times.push_back(p.tau * u(rng));
      std::sort(times.begin(), times.end());
      times.erase(std::unique(times.begin(), times.end()), times.end());
      auto orders = zio_orders(times, p.tau);
      if (trial % 2) {
        // Non-ZIO: shift a unit of stock between two orders.
        double d = 0.3 * orders.front().qty;
        orders.front().qty -= d;
        orders.back().qty += d;
      }
      p.schedules[i] = orders;
    }
    Instance inst(1e9, cs);
    EvalReport a = evaluate(p, inst);
    EvalReport b = oracle_integrate_cost(p, inst, 20000);
    CHECK(b.total_cost_rate == doctest::Approx(a.total_cost_rate).epsilon(1e-6));
    CHECK(b.v_max == doctest::Approx(a.v_max).epsilon(1e-6));
  }
}
