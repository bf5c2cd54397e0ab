#pragma once

#include "ewls/evaluator.hpp"
#include "ewls/model.hpp"
#include "ewls/relaxation.hpp"

namespace ewls {

struct TwoApproxResult {
  SosiPolicy policy;  // halved relaxation intervals, zero phases
  EvalReport report;
  double lower_bound = 0.0;
};

TwoApproxResult solve_two_approx(const Instance& inst);

}  // namespace ewls
