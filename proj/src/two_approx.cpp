#include "ewls/two_approx.hpp"

namespace ewls {

TwoApproxResult solve_two_approx(const Instance& inst) {
  RelaxationSolution relax = solve_sosi_relaxation(inst);
  TwoApproxResult r;
  for (const auto& [id, T] : relax.intervals) r.policy.intervals[id] = 0.5 * T;
  r.report = evaluate(sosi_to_glued(r.policy), inst);
  r.lower_bound = relax.objective;
  return r;
}

}  // namespace ewls
