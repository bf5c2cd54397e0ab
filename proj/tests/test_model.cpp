#include <cmath>
#include <random>

#include "doctest.h"

#include "ewls/errors.hpp"
#include "ewls/evaluator.hpp"
#include "ewls/json_io.hpp"
#include "ewls/model.hpp"

using namespace ewls;

namespace {
Instance unit_pair() { return Instance(1.0, {{0, 1, 1, 1}, {1, 1, 1, 1}}); }
}  // namespace

TEST_CASE("single interval expands to one order") {
  Instance inst(1.0, {{0, 1, 1, 1}});
  SosiPolicy p;
  p.intervals[0] = 1.0;
  CyclicPolicy c = sosi_to_cyclic(p, inst);
  CHECK(c.tau == doctest::Approx(1.0));
  REQUIRE(c.schedules.at(0).size() == 1);
  CHECK(c.schedules.at(0)[0].time == 0.0);
  CHECK(c.schedules.at(0)[0].qty == doctest::Approx(1.0));
}

TEST_CASE("half interval with phase 1/3 orders at 1/3 and 5/6") {
  SosiPolicy p;
  p.intervals = {{0, 1.0}, {1, 0.5}};
  p.phases[1] = 1.0 / 3.0;
  CyclicPolicy c = sosi_to_cyclic(p, unit_pair());
  CHECK(c.tau == doctest::Approx(1.0));
  REQUIRE(c.schedules.at(0).size() == 1);
  const auto& b = c.schedules.at(1);
  REQUIRE(b.size() == 2);
  CHECK(b[0].time == doctest::Approx(1.0 / 3.0));
  CHECK(b[1].time == doctest::Approx(5.0 / 6.0));
  CHECK(b[0].qty == doctest::Approx(0.5));
  CHECK(b[1].qty == doctest::Approx(0.5));
}

TEST_CASE("irrational interval ratio has no joint cycle") {
  SosiPolicy p;
  p.intervals = {{0, 1.0}, {1, std::sqrt(2.0) / 3.0}};
  CHECK_THROWS_AS(sosi_to_cyclic(p, unit_pair()), IncommensurateIntervals);
}

TEST_CASE("horizon mode truncates onto the given cycle") {
  SosiPolicy p;
  p.intervals = {{0, 1.0}, {1, std::sqrt(2.0) / 3.0}};
  SosiExpansion opt;
  opt.horizon = 10.0;
  CyclicPolicy c = sosi_to_cyclic(p, unit_pair(), opt);
  CHECK(c.tau == 10.0);
  CHECK_NOTHROW(validate_policy(c));
}

TEST_CASE("instance parsing and round trip") {
  std::string text = R"({"capacity":1.0,"commodities":[{"id":0,"K":1,"H":1,"gamma":1}]})";
  Instance inst = parse_instance(text);
  CHECK(inst.size() == 1);
  CHECK(inst.capacity() == 1.0);
  CHECK(serialize_instance(inst) == R"({"capacity":1.0,"commodities":[{"id":0,"K":1.0,"H":1.0,"gamma":1.0}]})");
  CHECK(serialize_instance(parse_instance(serialize_instance(inst))) == serialize_instance(inst));

  std::string bad = R"({"capacity":1.0,"commodities":[{"id":0,"K":-1,"H":1,"gamma":1}]})";
  try {
    parse_instance(bad);
    FAIL("expected ValueError");
  } catch (const ValueError& e) {
    CHECK(e.field().find('K') != std::string::npos);
  }
}

TEST_CASE("schema errors carry the field path") {
  try {
    parse_instance(R"({"capacity":1.0,"commodities":[{"id":0,"K":1,"H":1}]})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.commodities[0].gamma");
  }
  CHECK_THROWS_AS(parse_instance(R"({"capacity":"big","commodities":[]})"), SchemaError);
  CHECK_THROWS_AS(parse_instance("not json"), SchemaError);
  CHECK_THROWS_AS(parse_instance(R"({"capacity":1,"commodities":[{"id":0.5,"K":1,"H":1,"gamma":1}]})"),
                  SchemaError);
}

TEST_CASE("instance construction rejects invariant breaches") {
  CHECK_THROWS_AS(Instance(1.0, {}), ValueError);
  CHECK_THROWS_AS(Instance(0.0, {{0, 1, 1, 1}}), ValueError);
  CHECK_THROWS_AS(Instance(1.0, {{0, 1, 1, 1}, {0, 1, 1, 1}}), ValueError);
  CHECK_THROWS_AS(Instance(1.0, {{0, 0, 1, 1}}), ValueError);
  CHECK_THROWS_AS(Instance(1.0, {{0, 1, -2, 1}}), ValueError);
  CHECK_THROWS_AS(Instance(1.0, {{0, 1, 1, 0}}), ValueError);
  CHECK_THROWS_AS(Instance(NAN, {{0, 1, 1, 1}}), ValueError);
  CHECK_THROWS_AS(Instance(1.0, {{0, INFINITY, 1, 1}}), ValueError);
}

TEST_CASE("policy validation") {
  Instance inst = unit_pair();
  CyclicPolicy p{1.0, {{0, {{0.0, 1.0}}}}};
  CHECK_NOTHROW(validate_policy(p, &inst));
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{1.0, {{0, {{0.0, 0.9}}}}}), ValueError);
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{1.0, {{0, {{0.5, 0.5}, {0.2, 0.5}}}}}), ValueError);
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{1.0, {{0, {{1.0, 1.0}}}}}), ValueError);
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{1.0, {{0, {}}}}), ValueError);
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{1.0, {{7, {{0.0, 1.0}}}}}, &inst), ValueError);
  CHECK_THROWS_AS(validate_policy(CyclicPolicy{0.0, {}}), ValueError);

  SosiPolicy s;
  s.intervals[0] = 1.0;
  s.phases[0] = 1.0;
  CHECK_THROWS_AS(validate_sosi(s, inst), ValueError);
}

TEST_CASE("policy json round trip") {
  CyclicPolicy p{2.0, {{3, {{0.0, 0.5}, {0.5, 1.5}}}}};
  CyclicPolicy q = policy_from_json(nlohmann::json::parse(policy_to_json(p).dump()));
  CHECK(q.tau == p.tau);
  REQUIRE(q.schedules.at(3).size() == 2);
  CHECK(q.schedules.at(3)[1].qty == 1.5);
  GluedPolicy g = glued_from_json(nlohmann::json::parse(glued_to_json(as_glued(p)).dump()));
  CHECK(g.components.size() == 1);
}

TEST_CASE("expanded rational SOSI matches the closed form") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    std::vector<Commodity> cs;
    SosiPolicy p;
    double closed = 0.0;
    for (int i = 0; i < n; ++i) {
      double K = 0.1 + static_cast<double>(rng() % 100) / 10.0;
      double H = 0.1 + static_cast<double>(rng() % 100) / 10.0;
      cs.push_back({i, K, H, 1.0});
      double T = static_cast<double>(1 + rng() % 12) / static_cast<double>(1 << (rng() % 4));
      p.intervals[i] = T;
      closed += K / T + H * T;
    }
    Instance inst(100.0, cs);
    EvalReport r = evaluate(sosi_to_cyclic(p, inst), inst);
    CHECK(r.total_cost_rate == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("glue, scale, merge") {
  Instance inst = unit_pair();
  SosiPolicy p;
  p.intervals = {{0, 1.0}, {1, 0.5}};
  GluedPolicy g = sosi_to_glued(p);
  CHECK(g.components.size() == 2);
  CHECK_NOTHROW(validate_glued(g, inst));
  CHECK_THROWS_AS(validate_glued(GluedPolicy{{g.components[0]}}, inst), ValueError);
  auto merged = merge_components(g);
  REQUIRE(merged);
  CHECK(merged->tau == doctest::Approx(1.0));
  CHECK(merged->schedules.at(1).size() == 2);
  GluedPolicy s = scale_policy(g, 0.5);
  CHECK(s.components[0].tau == doctest::Approx(0.5));
  CHECK(s.components[0].schedules.at(0)[0].qty == doctest::Approx(0.5));
}

TEST_CASE("zero-inventory quantities fill the gaps") {
  auto o = zio_orders({0.5, 0.0, 0.25}, 1.0);
  REQUIRE(o.size() == 3);
  CHECK(o[0].qty == doctest::Approx(0.25));
  CHECK(o[1].qty == doctest::Approx(0.25));
  CHECK(o[2].qty == doctest::Approx(0.5));
}
