#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ewls/compare.hpp"
#include "ewls/couples.hpp"
#include "ewls/errors.hpp"
#include "ewls/evaluator.hpp"
#include "ewls/generator.hpp"
#include "ewls/json_io.hpp"
#include "ewls/oracle.hpp"
#include "ewls/ptas_dp.hpp"
#include "ewls/relaxation.hpp"
#include "ewls/sub2_pipeline.hpp"
#include "ewls/two_approx.hpp"

using namespace ewls;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Exit codes: 0 ok, 1 infeasible output, 2 bad input.
constexpr int kInfeasible = 1;
constexpr int kBadInput = 2;

std::string read_text(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << '\n';
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path, e.what());
  }
}

std::size_t state_cap_default() {
  if (const char* env = std::getenv("EWLSP_STATE_CAP")) return std::stoull(env);
  return GridOverrides{}.state_cap;
}

ordered_json rational_json(const Rational& r) { return {{"value", r.to_double()}, {"exact", r.str()}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Warehouse lot scheduling: generators, solvers, evaluators"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_path;
  app.add_option("--out", out_path, "Output file (default stdout)");

  // gen
  GenParams gp;
  std::string regime = "loose";
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--seed", gp.seed);
  gen->add_option("--n", gp.n)->check(CLI::PositiveNumber);
  gen->add_option("--spread", gp.spread);
  gen->add_option("--regime", regime)->check(CLI::IsMember({"loose", "tight", "dense-heavy"}));
  gen->add_option("--eps", gp.eps);
  gen->add_option("--octaves", gp.octaves);

  // relax
  std::string instance_path;
  std::optional<double> relax_eps, relax_rhs;
  auto* relax = app.add_subcommand("relax", "Solve the SOSI relaxation");
  relax->add_option("instance", instance_path)->required();
  relax->add_option("--eps", relax_eps, "Use the knapsack DP with this eps");
  relax->add_option("--rhs", relax_rhs, "Space budget (default 2V)");

  // solve
  std::string algo = "two-approx";
  double eps = 0.05;
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::optional<double> sparsity;
  std::optional<std::size_t> subgroups, prefix_count;
  std::string guess_mode = "reference";
  std::optional<int> grid_base, grid_points, levels;
  std::optional<std::size_t> state_cap;
  std::string diag_path;
  auto* solve = app.add_subcommand("solve", "Run a solver");
  solve->add_option("instance", instance_path)->required();
  solve->add_option("--algo", algo)->check(CLI::IsMember({"two-approx", "sub2", "ptas"}));
  solve->add_option("--eps", eps);
  solve->add_option("--seed", seed);
  solve->add_option("--trials", trials)->check(CLI::PositiveNumber);
  solve->add_option("--sparsity-threshold", sparsity);
  solve->add_option("--subgroups", subgroups);
  solve->add_option("--prefix-count", prefix_count);
  solve->add_option("--guess-mode", guess_mode)->check(CLI::IsMember({"reference", "exhaustive"}));
  solve->add_option("--grid-base", grid_base, "PTAS growth factor G (fine points default to G too)");
  solve->add_option("--grid-points", grid_points, "PTAS fine points per coarse interval");
  solve->add_option("--levels", levels, "PTAS frequency classes");
  solve->add_option("--state-cap", state_cap, "PTAS state cap (env EWLSP_STATE_CAP)");
  solve->add_option("--diagnostics", diag_path, "Write sub2 diagnostics here");

  // eval
  std::string policy_path;
  auto* eval = app.add_subcommand("eval", "Evaluate a policy");
  eval->add_option("instance", instance_path)->required();
  eval->add_option("policy", policy_path)->required();

  // oracle
  double tau = 1.0;
  int grid = 4, max_orders = 4;
  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum on a grid (n <= 2)");
  oracle->add_option("instance", instance_path)->required();
  oracle->add_option("--tau", tau);
  oracle->add_option("--grid", grid);
  oracle->add_option("--max-orders", max_orders);

  // couple
  int k = 0;
  auto* couple = app.add_subcommand("couple", "Show the normalized couple schedule for T_A/T_B = 2^k");
  couple->add_option("--k", k)->required()->check(CLI::Range(0, kMaxCoupleExponent));

  // compare
  std::string algos = "two-approx,sub2";
  std::string csv_path;
  auto* compare = app.add_subcommand("compare", "Compare solvers on one instance");
  compare->add_option("instance", instance_path)->required();
  compare->add_option("--algo", algos, "Comma-separated list");
  compare->add_option("--eps", eps);
  compare->add_option("--seed", seed, "First seed");
  compare->add_option("--trials", trials)->check(CLI::PositiveNumber);
  compare->add_option("--sparsity-threshold", sparsity);
  compare->add_option("--csv", csv_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gp.regime = parse_regime(regime);
      write_text(out_path, serialize_instance(generate_instance(gp)));
      return 0;
    }
    if (*couple) {
      CoupleSchedule cs = normalized_couple(k);
      Instance inst(100.0, {{0, 1.0, 1.0, 1.0}, {1, 1.0, 1.0, std::ldexp(1.0, k)}});
      EvalReport r = evaluate(cs.policy, inst);
      double nominal = 1.0;  // gamma_A Ibar_A + gamma_B Ibar_B with equal peak space 1
      ordered_json j;
      j["k"] = k;
      j["case"] = cs.case_id;
      j["policy"] = policy_to_json(cs.policy);
      j["claimed_vmax_ratio"] = rational_json(cs.claimed_vmax_ratio);
      j["claimed_cost_ratio"] = rational_json(cs.claimed_cost_ratio);
      j["measured_vmax_ratio"] = r.v_max / nominal;
      j["report"] = report_to_json(r);
      write_text(out_path, j.dump(2));
      return 0;
    }

    Instance inst = instance_from_json(read_json(instance_path));

    if (*relax) {
      RelaxationSolution s = relax_eps ? solve_sosi_dp(inst, *relax_eps, relax_rhs) : solve_sosi_relaxation(inst, relax_rhs);
      write_text(out_path, relaxation_to_json(s).dump(2));
      return 0;
    }
    if (*eval) {
      GluedPolicy g = glued_from_json(read_json(policy_path));
      validate_glued(g, inst);
      EvalReport r = g.components.size() == 1 ? evaluate(g.components[0], inst) : evaluate(g, inst);
      write_text(out_path, report_to_json(r).dump(2));
      return r.feasible ? 0 : kInfeasible;
    }
    if (*oracle) {
      OracleResult o = oracle_opt_cyclic(inst, tau, grid, max_orders);
      ordered_json j;
      j["found"] = o.found;
      if (o.found) {
        j["cost"] = o.cost;
        j["policy"] = policy_to_json(o.policy);
      }
      write_text(out_path, j.dump(2));
      return o.found ? 0 : kInfeasible;
    }

    PipelineConfig cfg;
    cfg.eps = eps;
    cfg.sparsity_threshold = sparsity;
    cfg.Q = subgroups;
    cfg.prefix_count = prefix_count;
    cfg.guess_mode = guess_mode == "exhaustive" ? GuessMode::exhaustive : GuessMode::reference;

    if (*compare) {
      CompareOptions opt;
      opt.algos.clear();
      std::stringstream ss(algos);
      for (std::string a; std::getline(ss, a, ',');)
        if (!a.empty()) opt.algos.push_back(a);
      opt.seeds.clear();
      for (std::size_t t = 0; t < trials; ++t) opt.seeds.push_back(seed + t);
      opt.sub2 = cfg;
      opt.ptas_eps = eps;
      auto rows = run_compare(inst, opt);
      if (!csv_path.empty()) write_text(csv_path, rows_to_csv(rows));
      write_text(out_path, rows_to_json(rows).dump(2));
      return all_feasible(rows) ? 0 : kInfeasible;
    }

    // solve
    ordered_json j;
    bool feasible = true;
    if (algo == "two-approx") {
      TwoApproxResult r = solve_two_approx(inst);
      j["policy"] = glued_to_json(sosi_to_glued(r.policy));
      j["report"] = report_to_json(r.report);
      j["lower_bound"] = r.lower_bound;
      feasible = r.report.feasible;
    } else if (algo == "ptas") {
      PtasOptions po = desk_options(inst.size());
      po.state_cap = state_cap.value_or(state_cap_default());
      if (grid_base) {
        po.growth = *grid_base;
        po.points = grid_points.value_or(*grid_base);
      } else if (grid_points) {
        po.points = *grid_points;
      }
      if (levels) po.levels = *levels;
      PtasResult r = ptas_solve(inst, eps, po);
      j["policy"] = policy_to_json(r.policy);
      j["report"] = report_to_json(r.report);
      j["dp_cost_rate"] = r.dp_cost_rate;
      j["scale"] = r.scale;
      j["grid"] = {{"tau", r.grid.tau}, {"levels", r.grid.levels}, {"growth", r.grid.growth}, {"points", r.grid.points}};
      feasible = r.report.feasible;
    } else {
      ordered_json runs = ordered_json::array();
      json diags = json::array();
      for (std::size_t t = 0; t < trials; ++t) {
        Sub2Result r = solve_sub2(inst, cfg, seed + t);
        if (t == 0) j["policy"] = glued_to_json(r.policy);
        runs.push_back({{"seed", seed + t}, {"report", report_to_json(r.report)}});
        diags.push_back(r.diagnostics);
        feasible = feasible && r.report.feasible;
      }
      if (trials == 1) {
        j["report"] = runs[0]["report"];
      } else {
        j["trials"] = runs;
      }
      json d = trials == 1 ? diags[0] : diags;
      if (diag_path.empty()) {
        j["diagnostics"] = d;
      } else {
        write_text(diag_path, d.dump(2));
      }
    }
    write_text(out_path, j.dump(2));
    return feasible ? 0 : kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
}
