#include "ewls/compare.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <thread>

#include "ewls/errors.hpp"
#include "ewls/evaluator.hpp"
#include "ewls/relaxation.hpp"
#include "ewls/two_approx.hpp"

namespace ewls {

namespace {

struct Job {
  std::string algo;
  std::uint64_t seed;
};

CompareRow run_one(const Instance& inst, const CompareOptions& opt, const Job& job, double lb) {
  CompareRow row;
  row.algo = job.algo;
  row.seed = job.seed;
  row.lower_bound = lb;
  auto t0 = std::chrono::steady_clock::now();
  try {
    EvalReport r;
    if (job.algo == "two-approx") {
      r = solve_two_approx(inst).report;
    } else if (job.algo == "sub2") {
      Sub2Result s = solve_sub2(inst, opt.sub2, job.seed);
      r = s.report;
      row.reference_ratio = r.total_cost_rate / s.reference_cost;
    } else if (job.algo == "ptas") {
      r = ptas_solve(inst, opt.ptas_eps).report;
    } else {
      throw ValueError("algo", "unknown algorithm '" + job.algo + "'");
    }
    row.cost = r.total_cost_rate;
    row.vmax_over_V = r.v_max / inst.capacity();
    row.feasible = r.feasible;
  } catch (const std::exception& e) {
    row.error = e.what();
    row.feasible = false;
  }
  row.ratio = row.cost / lb;
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::vector<CompareRow> run_compare(const Instance& inst, const CompareOptions& opt) {
  for (const auto& a : opt.algos)
    if (a != "two-approx" && a != "sub2" && a != "ptas") throw ValueError("algos", "unknown algorithm '" + a + "'");
  if (opt.seeds.empty()) throw ValueError("seeds", "at least one seed required");
  double lb = solve_sosi_relaxation(inst).objective;
  std::vector<std::uint64_t> seeds = opt.seeds;
  std::sort(seeds.begin(), seeds.end());
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < seeds.size(); ++s)
    for (const auto& a : opt.algos)
      if (a == "sub2" || s == 0) jobs.push_back({a, seeds[s]});

  std::vector<CompareRow> rows(jobs.size());
  std::size_t threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) rows[i] = run_one(inst, opt, jobs[i], lb);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

bool all_feasible(const std::vector<CompareRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const CompareRow& r) { return r.feasible; });
}

std::string rows_to_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "algo,seed,cost,lower_bound,ratio,reference_ratio,vmax_over_V,runtime_ms,feasible\n";
  for (const auto& r : rows)
    out << r.algo << ',' << r.seed << ',' << r.cost << ',' << r.lower_bound << ',' << r.ratio << ','
        << r.reference_ratio << ',' << r.vmax_over_V << ',' << r.runtime_ms << ',' << (r.feasible ? 1 : 0) << '\n';
  return out.str();
}

nlohmann::ordered_json rows_to_json(const std::vector<CompareRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["algo"] = r.algo;
    j["seed"] = r.seed;
    j["cost"] = r.cost;
    j["lower_bound"] = r.lower_bound;
    j["ratio"] = r.ratio;
    if (r.algo == "sub2") j["reference_ratio"] = r.reference_ratio;
    j["vmax_over_V"] = r.vmax_over_V;
    j["runtime_ms"] = r.runtime_ms;
    j["feasible"] = r.feasible;
    if (!r.error.empty()) j["error"] = r.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace ewls
