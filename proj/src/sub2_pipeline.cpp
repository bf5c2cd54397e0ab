#include "ewls/sub2_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "ewls/couples.hpp"
#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"
#include "ewls/partition_matching.hpp"
#include "ewls/po2_rounding.hpp"
#include "ewls/ptas_dp.hpp"
#include "ewls/relaxation.hpp"
#include "ewls/two_approx.hpp"

namespace ewls {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GluedPolicy sosi_glued(const std::map<int, double>& intervals) {
  SosiPolicy p;
  p.intervals = intervals;
  return sosi_to_glued(p);
}

constexpr double kReferenceOrders = 1 << 18;

double slab_top(double V, double eps, int ell) { return V / std::pow(1.0 + eps, ell - 1); }

// Scales down by the measured peak; never scales up.
GluedPolicy fit_to_capacity(const GluedPolicy& g, const Instance& inst, json& diag, double worst_case_factor) {
  EvalReport r = evaluate(g, inst);
  double factor = std::max(1.0, r.v_max / inst.capacity() * (1.0 + 1e-12));
  diag["vmax_before_scaling"] = r.v_max / inst.capacity();
  diag["scale_factor"] = factor;
  diag["worst_case_scale_factor"] = worst_case_factor;
  return factor > 1.0 ? scale_policy(g, 1.0 / factor) : g;
}

std::vector<int> concat_members(const ClassDecomposition& d, const std::vector<ClassLabel>& labels) {
  std::vector<int> out;
  for (ClassLabel l : labels) {
    auto m = d.members(l);
    out.insert(out.end(), m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// SOSI at the relaxation optimum with the given budget; peak at most rhs.
GluedPolicy relaxed_sosi(const Instance& inst, const std::vector<int>& ids, double rhs, json& diag) {
  if (ids.empty()) return {};
  Instance sub = inst.subset(ids);
  RelaxationSolution sol = solve_sosi_relaxation(sub, rhs);
  diag["rhs"] = rhs;
  diag["lambda"] = sol.lambda;
  diag["objective"] = sol.objective;
  return sosi_glued(sol.intervals);
}

double difficult_worst_case_factor(const PipelineConfig& cfg) {
  double e = cfg.eps;
  return (1.0 + 8.0 * e) * (1.0 + cfg.alpha_fallback + cfg.delta / 2.0 + 12.0 * e);
}

struct DenseClassOutcome {
  GluedPolicy policy;
  json diag;
};

DenseClassOutcome dense_class_policy(const Instance& inst, const PipelineConfig& cfg, int ell,
                                     const std::vector<int>& members, const std::map<int, double>& T_hat,
                                     std::uint64_t seed) {
  DenseClassOutcome out;
  json& dg = out.diag;
  dg["class"] = class_name(ell);
  dg["size"] = members.size();
  std::map<int, double> own;
  for (int id : members) own[id] = T_hat.at(id);
  Instance sub = inst.subset(members);
  double hat_cost = 0.0;
  for (int id : members) hat_cost += sosi_cost(inst.by_id(id), own[id]);
  dg["hat_cost"] = hat_cost;

  if (ell == kInfClass) {
    dg["branch"] = "infinity";
    out.policy = sosi_glued(own);
    return out;
  }

  HeavyLightSplit split = split_heavy_light(inst, members, own, ell, cfg);
  dg["heavy"] = split.heavy.size();
  dg["light"] = split.light.size();
  if (2 * split.light.size() >= members.size()) {
    dg["branch"] = "light-majority";
    out.policy = sosi_glued(own);
    return out;
  }

  double eps = cfg.eps;
  std::map<int, double> rounded;
  std::vector<GluedPolicy> parts;
  json groups = json::array();
  for (std::size_t q = 0; q < split.subgroups.size(); ++q) {
    const auto& group = split.subgroups[q];
    std::mt19937_64 rng(stream_seed(seed, ell, q));
    double theta = uniform01(rng) - 0.5;
    std::map<int, double> in;
    for (int id : group) in[id] = own[id];
    Po2Outcome po2 = po2_round(in, theta);
    std::vector<GroupEntry> entries;
    for (int id : group) {
      rounded[id] = po2.rounded.at(id);
      entries.push_back({id, inst.by_id(id).gamma, rounded[id]});
    }
    PairClassification pc = classify_pairs(entries, eps);
    std::map<int, double> singles;
    std::size_t demoted = 0;
    json cases = json::array();
    for (auto [x, y] : pc.near) {
      if (rounded[y] > rounded[x]) std::swap(x, y);
      CoupleInput ci{inst.by_id(x), inst.by_id(y), rounded[x], rounded[y], eps};
      try {
        CoupleSchedule cs = synthesize_couple(ci);
        cases.push_back(cs.case_id);
        parts.push_back(as_glued(std::move(cs.policy)));
      } catch (const std::length_error&) {
        // Exponent past the couple table: behave as a far pair.
        ++demoted;
        singles[x] = rounded[x];
        singles[y] = rounded[y];
      }
    }
    for (auto [x, y] : pc.far) {
      singles[x] = rounded[x];
      singles[y] = rounded[y];
    }
    if (pc.leftover) singles[*pc.leftover] = rounded[*pc.leftover];
    parts.push_back(sosi_glued(singles));
    groups.push_back({{"theta", theta},
                      {"size", group.size()},
                      {"near", pc.near.size()},
                      {"far", pc.far.size()},
                      {"demoted", demoted},
                      {"couple_cases", cases}});
  }
  std::map<int, double> light;
  for (int id : split.light) light[id] = own[id];
  parts.push_back(sosi_glued(light));

  double lhs = 0.0, base = 0.0;
  for (int id : split.heavy) {
    double g = inst.by_id(id).gamma;
    lhs += g * rounded[id];
    base += g * own[id];
  }
  double rhs = (1.0 + eps) * kPo2Mean * base;
  bool event = lhs <= rhs;
  dg["subgroups"] = groups;
  dg["event_lhs"] = lhs;
  dg["event_rhs"] = rhs;
  dg["event"] = event;
  if (event) {
    dg["branch"] = "po2-sync";
    out.policy = glue(std::move(parts));
  } else {
    dg["branch"] = "fallback";
    std::map<int, double> scaled;
    for (const auto& [id, T] : own) scaled[id] = cfg.alpha_fallback * T;
    out.policy = sosi_glued(scaled);
  }
  EvalReport r = evaluate(out.policy, sub);
  double slab = slab_top(inst.capacity(), eps, ell);
  dg["vmax"] = r.v_max;
  dg["vmax_bound"] = (1.0 + 6.0 * eps) * 1.75 * kPo2Mean * static_cast<double>(members.size()) * slab;
  dg["cost"] = r.total_cost_rate;
  return out;
}

BranchResult run_labeled(const Instance& inst, const PipelineConfig& cfg, const ClassDecomposition& d,
                         const CyclicPolicy& ref, std::uint64_t seed) {
  double V = inst.capacity();
  double eps = cfg.eps;
  BranchResult out;
  json& dg = out.diagnostics;
  dg["V_S"] = d.V_S / V;
  dg["V_D"] = d.V_D / V;
  json labels = json::object();
  for (const auto& [ell, l] : d.labels) labels[class_name(ell)] = label_name(l);
  dg["labels"] = labels;

  if (d.V_S >= (0.5 + cfg.delta) * V) {
    dg["scenario"] = "easy";
    BranchResult easy = run_easy_scenario(inst, cfg, d, ref);
    dg["easy"] = easy.diagnostics;
    out.policy = std::move(easy.policy);
    return out;
  }
  if (d.V_D < (0.5 - 2.0 * cfg.delta) * V) {
    dg["scenario"] = "combined";
    json cd;
    GluedPolicy g = relaxed_sosi(inst, inst.ids(), 2.0 * (d.V_S + d.V_D + eps * V), cd);
    out.policy = fit_to_capacity(g, inst, cd, 2.0 - 2.0 * cfg.delta + 4.0 * eps);
    dg["combined"] = cd;
    return out;
  }
  dg["scenario"] = "difficult";
  json pd;
  auto prefix = d.members(ClassLabel::prefix_sparse);
  GluedPolicy pre = relaxed_sosi(inst, prefix, 2.0 * (d.volume(ClassLabel::prefix_sparse) + eps * V), pd);
  dg["prefix"] = pd;
  BranchResult dense = run_dense_branch(inst, cfg, d, ref, seed);
  dg["suffix_dense"] = dense.diagnostics;
  json fd;
  out.policy = fit_to_capacity(glue({std::move(pre), std::move(dense.policy)}), inst, fd, difficult_worst_case_factor(cfg));
  dg["final"] = fd;
  return out;
}

void recompute_aggregates(ClassDecomposition& d) {
  d.V_S = d.V_D = 0.0;
  for (const auto& [ell, l] : d.labels) (l == ClassLabel::dense ? d.V_D : d.V_S) += d.avg_space.at(ell);
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(eps > 0.0 && eps < 0.1)) throw ValueError("eps", "must lie in (0, 0.1)");
  if (!(delta > 0.0 && delta < 0.5)) throw ValueError("delta", "must lie in (0, 1/2)");
  if (Q && *Q < 1) throw ValueError("Q", "must be >= 1");
  if (!(alpha_fallback > 0.0)) throw ValueError("alpha_fallback", "must be > 0");
  if (!(volume_slack >= 0.0)) throw ValueError("volume_slack", "must be >= 0");
  if (sparsity_threshold && !(*sparsity_threshold >= 0.0)) throw ValueError("sparsity_threshold", "must be >= 0");
}

double PipelineConfig::threshold() const {
  if (sparsity_threshold) return *sparsity_threshold;
  return 100.0 * std::log(1.0 / eps) / std::pow(eps, 4);
}

std::size_t PipelineConfig::subgroups() const {
  if (Q) return *Q;
  return static_cast<std::size_t>(std::ceil(20.0 * std::log(1.0 / eps) / (eps * eps)));
}

std::size_t PipelineConfig::delta_count() const {
  if (prefix_count) return *prefix_count;
  double x = 125.0 * std::log(1.0 / eps) / std::pow(eps, 6);
  return static_cast<std::size_t>(std::ceil(std::log(x) / std::log1p(eps)));
}

std::string label_name(ClassLabel l) {
  switch (l) {
    case ClassLabel::prefix_sparse: return "prefix-sparse";
    case ClassLabel::suffix_sparse: return "suffix-sparse";
    case ClassLabel::dense: return "dense";
  }
  return "?";
}

std::vector<int> ClassDecomposition::members(ClassLabel l) const {
  std::vector<int> out;
  for (const auto& [ell, lab] : labels)
    if (lab == l) out.insert(out.end(), classes.at(ell).begin(), classes.at(ell).end());
  std::sort(out.begin(), out.end());
  return out;
}

double ClassDecomposition::volume(ClassLabel l) const {
  double s = 0.0;
  for (const auto& [ell, lab] : labels)
    if (lab == l) s += avg_space.at(ell);
  return s;
}

CyclicPolicy build_reference_policy(const Instance& inst, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValueError("eps", "must lie in (0, 1)");
  TwoApproxResult two = solve_two_approx(inst);
  double T_max = 0.0;
  for (const auto& kv : two.policy.intervals) T_max = std::max(T_max, kv.second);
  double spread = 0.0;
  for (const auto& kv : two.policy.intervals) spread += T_max / kv.second;
  // tau = M * T_max; each interval snaps down to tau / m_i, relative error at most 1/M.
  double M = std::clamp(std::floor(kReferenceOrders / spread), 1.0, 1024.0);
  CyclicPolicy p;
  p.tau = M * T_max;
  for (const auto& [id, T] : two.policy.intervals) {
    auto m = static_cast<std::size_t>(std::ceil(p.tau / T * (1.0 - 1e-12)));
    m = std::max<std::size_t>(m, 1);
    double step = p.tau / static_cast<double>(m);
    auto& orders = p.schedules[id];
    orders.reserve(m);
    for (std::size_t j = 0; j < m; ++j) orders.push_back({static_cast<double>(j) * step, step});
  }
  return p;
}

int class_limit(std::size_t n, double eps) {
  return static_cast<int>(std::ceil(std::log(static_cast<double>(n) / eps) / std::log1p(eps) - 1e-12));
}

int volume_class(double space, double V, double eps, int L) {
  if (!(space > 0.0)) return kInfClass;
  double r = std::log(V / space) / std::log1p(eps);
  if (r > L + 2) return kInfClass;
  int ell = std::max(1, static_cast<int>(std::ceil(r)));
  while (ell > 1 && space > slab_top(V, eps, ell)) --ell;
  while (space <= slab_top(V, eps, ell + 1)) ++ell;
  return ell > L ? kInfClass : ell;
}

ClassDecomposition decompose_classes(const CyclicPolicy& ref, const Instance& inst, const PipelineConfig& cfg) {
  ClassDecomposition d;
  d.eps = cfg.eps;
  d.V = inst.capacity();
  d.n = inst.size();
  d.L = class_limit(d.n, cfg.eps);
  EvalReport r = evaluate(ref, inst);
  for (const auto& c : inst.commodities()) {
    double s = c.gamma * r.avg_inventory.at(c.id);
    int ell = volume_class(s, d.V, cfg.eps, d.L);
    d.classes[ell].push_back(c.id);
    d.avg_space[ell] += s;
    d.class_of[c.id] = ell;
  }
  for (auto& kv : d.classes) std::sort(kv.second.begin(), kv.second.end());
  double thr = cfg.threshold();
  std::size_t prefix_left = cfg.delta_count();
  for (const auto& [ell, ids] : d.classes) {
    if (static_cast<double>(ids.size()) > thr) {
      d.labels[ell] = ClassLabel::dense;
    } else if (prefix_left > 0) {
      d.labels[ell] = ClassLabel::prefix_sparse;
      --prefix_left;
    } else {
      d.labels[ell] = ClassLabel::suffix_sparse;
    }
  }
  recompute_aggregates(d);
  return d;
}

HeavyLightSplit split_heavy_light(const Instance& inst, const std::vector<int>& members,
                                  const std::map<int, double>& T_hat, int ell, const PipelineConfig& cfg) {
  HeavyLightSplit s;
  double cut = 0.75 * slab_top(inst.capacity(), cfg.eps, ell);
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  for (int id : sorted) {
    double half_peak = 0.5 * inst.by_id(id).gamma * T_hat.at(id);
    (ell != kInfClass && half_peak > cut ? s.heavy : s.light).push_back(id);
  }
  if (s.heavy.empty()) return s;
  // Each subgroup keeps at least 2/eps^2 members so the rounding concentrates.
  double floor_q = std::floor(static_cast<double>(s.heavy.size()) * cfg.eps * cfg.eps / 2.0);
  std::size_t q = std::min(cfg.subgroups(), std::max<std::size_t>(1, static_cast<std::size_t>(floor_q)));
  s.subgroups.assign(q, {});
  for (std::size_t i = 0; i < s.heavy.size(); ++i) s.subgroups[i % q].push_back(s.heavy[i]);
  return s;
}

std::uint64_t stream_seed(std::uint64_t seed, int ell, std::size_t q) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(ell)));
  return splitmix64(h ^ (static_cast<std::uint64_t>(q) << 1));
}

BranchResult run_easy_scenario(const Instance& inst, const PipelineConfig& cfg, const ClassDecomposition& d,
                               const CyclicPolicy& /*ref*/) {
  BranchResult out;
  json& dg = out.diagnostics;
  double V = inst.capacity();
  auto prefix = d.members(ClassLabel::prefix_sparse);
  auto rest = concat_members(d, {ClassLabel::suffix_sparse, ClassLabel::dense});
  GluedPolicy pre;
  dg["prefix_count"] = prefix.size();
  if (prefix.empty()) {
    dg["prefix_solver"] = "none";
  } else {
    Instance sub = inst.subset(prefix);
    bool done = false;
    if (prefix.size() <= cfg.ptas_max_commodities) {
      try {
        PtasResult pr = ptas_solve(sub, cfg.ptas_eps);
        pre = as_glued(std::move(pr.policy));
        dg["prefix_solver"] = "ptas";
        done = true;
      } catch (const std::runtime_error& e) {
        dg["ptas_error"] = e.what();
      }
    }
    if (!done) {
      pre = sosi_glued(solve_two_approx(sub).policy.intervals);
      dg["prefix_solver"] = "two-approx";
    }
  }
  json rd;
  double rest_volume = d.volume(ClassLabel::suffix_sparse) + d.volume(ClassLabel::dense);
  GluedPolicy tail = relaxed_sosi(inst, rest, 2.0 * (rest_volume + cfg.eps * V), rd);
  dg["suffix_dense"] = rd;
  out.policy = fit_to_capacity(glue({std::move(pre), std::move(tail)}), inst, dg,
                               2.0 - 2.0 * cfg.delta + 5.0 * cfg.eps);
  return out;
}

BranchResult run_dense_branch(const Instance& inst, const PipelineConfig& cfg, const ClassDecomposition& d,
                              const CyclicPolicy& /*ref*/, std::uint64_t seed) {
  BranchResult out;
  json& dg = out.diagnostics;
  double V = inst.capacity();
  MatchingInstance mi;
  mi.commodities = concat_members(d, {ClassLabel::suffix_sparse, ClassLabel::dense});
  if (mi.commodities.empty()) {
    dg["classes"] = json::array();
    return out;
  }
  for (const auto& [ell, lab] : d.labels) {
    if (lab == ClassLabel::prefix_sparse) continue;
    mi.classes.push_back(ell);
    int size = static_cast<int>(d.classes.at(ell).size());
    if (lab == ClassLabel::suffix_sparse) {
      mi.degree_bounds[ell] = {size, size};
    } else {
      int lo = static_cast<int>(std::ceil(cfg.threshold() - 1e-9));
      int hi;
      if (ell == kInfClass) {
        hi = static_cast<int>(d.n);
      } else {
        double n_tilde = std::pow(1.0 + cfg.eps, ell) * (d.avg_space.at(ell) / V + cfg.volume_slack);
        hi = static_cast<int>(std::floor(n_tilde + 1e-9));
      }
      mi.degree_bounds[ell] = {lo, hi};
    }
  }
  for (int id : mi.commodities) {
    for (int ell : mi.classes) {
      EdgeWeight w = edge_weight(inst.by_id(id), ell, cfg.eps, V, d.n);
      mi.weights[{id, ell}] = w.w;
      mi.intervals[{id, ell}] = w.T_hat;
    }
  }
  MimickingPartition part = solve_b_matching(mi);
  dg["matching_weight"] = part.total_weight;

  std::map<int, std::vector<int>> tilde;
  for (const auto& [id, ell] : part.assignment) tilde[ell].push_back(id);
  std::vector<GluedPolicy> pieces;
  json classes = json::array();
  for (int ell : mi.classes) {
    auto& members = tilde[ell];
    std::sort(members.begin(), members.end());
    if (members.empty()) continue;
    if (d.labels.at(ell) == ClassLabel::suffix_sparse) {
      std::map<int, double> own;
      for (int id : members) own[id] = part.intervals.at(id);
      pieces.push_back(sosi_glued(own));
      classes.push_back({{"class", class_name(ell)}, {"size", members.size()}, {"branch", "suffix"}});
      continue;
    }
    DenseClassOutcome dc = dense_class_policy(inst, cfg, ell, members, part.intervals, seed);
    pieces.push_back(std::move(dc.policy));
    classes.push_back(std::move(dc.diag));
  }
  dg["classes"] = classes;
  out.policy = glue(std::move(pieces));
  return out;
}

namespace {

Sub2Result finish(const Instance& inst, GluedPolicy policy, json diag, double ref_cost) {
  Sub2Result r;
  r.report = evaluate(policy, inst);
  if (!r.report.feasible) throw std::logic_error("sub-2 output violates capacity");
  r.policy = std::move(policy);
  r.reference_cost = ref_cost;
  diag["cost"] = r.report.total_cost_rate;
  diag["reference_cost"] = ref_cost;
  diag["cost_over_reference"] = r.report.total_cost_rate / ref_cost;
  diag["vmax_over_V"] = r.report.v_max / inst.capacity();
  r.diagnostics = std::move(diag);
  return r;
}

}  // namespace

Sub2Result solve_sub2(const Instance& inst, const PipelineConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  seed ^= cfg.rng_seed;
  CyclicPolicy ref = build_reference_policy(inst, cfg.eps);
  double ref_cost = evaluate(ref, inst).total_cost_rate;
  ClassDecomposition d = decompose_classes(ref, inst, cfg);

  if (cfg.guess_mode == GuessMode::reference) {
    BranchResult b = run_labeled(inst, cfg, d, ref, seed);
    b.diagnostics["guess_mode"] = "reference";
    b.diagnostics["seed"] = seed;
    return finish(inst, std::move(b.policy), std::move(b.diagnostics), ref_cost);
  }

  // Every labeling of the nonempty classes with prefix classes ahead of suffix classes.
  std::vector<int> ells;
  for (const auto& kv : d.classes) ells.push_back(kv.first);
  if (ells.size() > 3) throw SearchSpaceExceeded("exhaustive mode supports at most 3 nonempty classes");
  std::size_t combos = 1;
  for (std::size_t i = 0; i < ells.size(); ++i) combos *= 3;
  std::optional<BranchResult> best;
  double best_cost = INFINITY;
  json tried = json::array();
  for (std::size_t code = 0; code < combos; ++code) {
    ClassDecomposition g = d;
    std::size_t c = code;
    bool ordered = true;
    bool seen_suffix = false;
    for (int ell : ells) {
      auto lab = static_cast<ClassLabel>(c % 3);
      c /= 3;
      g.labels[ell] = lab;
      if (lab == ClassLabel::suffix_sparse) seen_suffix = true;
      if (lab == ClassLabel::prefix_sparse && seen_suffix) ordered = false;
    }
    if (!ordered) continue;
    std::size_t dense = 0;
    for (const auto& kv : g.labels) dense += kv.second == ClassLabel::dense;
    if (dense > 0) {
      // Volume guesses live on a grid of eps*V/|D|; round up.
      double unit = cfg.eps * g.V / static_cast<double>(dense);
      for (auto& [ell, v] : g.avg_space)
        if (g.labels[ell] == ClassLabel::dense) v = std::ceil(v / unit - 1e-12) * unit;
    }
    recompute_aggregates(g);
    json entry;
    for (const auto& [ell, l] : g.labels) entry["labels"][class_name(ell)] = label_name(l);
    try {
      BranchResult b = run_labeled(inst, cfg, g, ref, seed);
      double cost = evaluate(b.policy, inst).total_cost_rate;
      entry["cost"] = cost;
      if (cost < best_cost) {
        best_cost = cost;
        best = std::move(b);
      }
    } catch (const InfeasibleMatching& e) {
      entry["skipped"] = e.what();
    }
    tried.push_back(std::move(entry));
  }
  if (!best) throw std::logic_error("no labeling produced a policy");
  best->diagnostics["guess_mode"] = "exhaustive";
  best->diagnostics["labelings"] = tried;
  best->diagnostics["seed"] = seed;
  return finish(inst, std::move(best->policy), std::move(best->diagnostics), ref_cost);
}

RandomizedPolicy make_sub2_randomized_policy(const Instance& inst, const PipelineConfig& cfg) {
  RandomizedPolicy rp;
  rp.description = "sub2 pipeline, eps=" + std::to_string(cfg.eps);
  rp.sampler = [inst, cfg](std::uint64_t seed) { return solve_sub2(inst, cfg, seed).policy; };
  return rp;
}

}  // namespace ewls
