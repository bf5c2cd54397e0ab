#include <cmath>

#include "doctest.h"

#include "ewls/eoq.hpp"
#include "ewls/generator.hpp"
#include "ewls/relaxation.hpp"

using namespace ewls;

namespace {
Instance twin() { return Instance(1.0, {{0, 1, 1, 1}, {1, 1, 1, 1}}); }
}  // namespace

TEST_CASE("symmetric binding example") {
  RelaxationSolution s = solve_sosi_relaxation(twin(), 1.0);
  CHECK(s.intervals.at(0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.intervals.at(1) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(s.lambda == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(s.objective == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(s.budget_cap == 1.0);
  CHECK(std::fabs(s.budget_used - 1.0) <= 1e-8);
}

TEST_CASE("symmetric example agrees with a grid search over equal intervals") {
  double best = INFINITY;
  for (double T = 1e-6; 2 * T <= 1.0; T += 1e-6) best = std::min(best, 2 * sosi_cost(1, 1, T));
  CHECK(solve_sosi_relaxation(twin(), 1.0).objective == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("unbinding budget keeps the unconstrained optimum") {
  RelaxationSolution s = solve_sosi_relaxation(twin(), 4.0);
  CHECK(s.intervals.at(0) == doctest::Approx(1.0));
  CHECK(s.lambda == 0.0);
  CHECK(s.objective == doctest::Approx(4.0));
  CHECK(s.budget_used <= s.budget_cap);
}

TEST_CASE("single commodity reduces to the constrained optimum") {
  Instance inst(0.5, {{0, 4, 1, 1}});
  RelaxationSolution s = solve_sosi_relaxation(inst, 1.0);
  CHECK(s.intervals.at(0) == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(5.0));
  // Default right-hand side is 2V.
  CHECK(solve_sosi_relaxation(inst).budget_cap == doctest::Approx(1.0));
}

TEST_CASE("knapsack variant") {
  RelaxationSolution fine = solve_sosi_dp(twin(), 0.01, 1.0);
  CHECK(fine.objective >= 5.0 - 1e-9);
  CHECK(fine.objective <= 5.05);
  CHECK(fine.budget_used <= 1.0 + 1e-12);
  RelaxationSolution coarse = solve_sosi_dp(twin(), 0.5, 1.0);
  CHECK(coarse.objective <= 1.5 * 5.0);

  Instance one(0.5, {{0, 4, 1, 1}});
  RelaxationSolution d = solve_sosi_dp(one, 0.1, 1.0);
  CHECK(d.objective >= 5.0 - 1e-12);
  CHECK(d.intervals.at(0) >= 1.0 - 0.1 * 1.0 / 2.0 - 1e-12);
}

TEST_CASE("knapsack within 1+eps of bisection on random instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams g;
    g.seed = seed;
    g.n = 1 + seed % 8;
    g.regime = seed % 2 ? CapacityRegime::tight : CapacityRegime::loose;
    Instance inst = generate_instance(g);
    double exact = solve_sosi_relaxation(inst).objective;
    for (double eps : {0.5, 0.1}) {
      double dp = solve_sosi_dp(inst, eps).objective;
      CHECK(dp >= exact * (1 - 1e-9));
      CHECK(dp <= (1 + eps) * exact * (1 + 1e-9));
    }
  }
}

TEST_CASE("complementary slackness and monotonicity") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GenParams g;
    g.seed = seed;
    g.n = 1 + seed % 10;
    g.regime = seed % 2 ? CapacityRegime::tight : CapacityRegime::loose;
    Instance inst = generate_instance(g);
    RelaxationSolution s = solve_sosi_relaxation(inst);
    if (s.lambda == 0.0) {
      CHECK(s.budget_used <= s.budget_cap * (1 + 1e-12));
    } else {
      CHECK(std::fabs(s.budget_used - s.budget_cap) <= 1e-8 * s.budget_cap);
    }
    double prev = s.objective;
    for (double f : {0.8, 0.5, 0.2}) {
      double o = solve_sosi_relaxation(inst, f * s.budget_cap).objective;
      CHECK(o >= prev * (1 - 1e-12));
      prev = o;
    }
  }
}

TEST_CASE("generator regimes set the multiplier") {
  GenParams g;
  g.seed = 1;
  g.n = 2;
  g.regime = CapacityRegime::loose;
  CHECK(solve_sosi_relaxation(generate_instance(g)).lambda == 0.0);
  g.regime = CapacityRegime::tight;
  CHECK(solve_sosi_relaxation(generate_instance(g)).lambda > 0.0);
}
