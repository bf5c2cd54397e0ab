#include "ewls/ptas_dp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"

namespace ewls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxGrid = 1 << 30;

int clamp_pow(double base, int e) {
  double v = std::pow(base, e);
  return v >= kMaxGrid ? kMaxGrid : static_cast<int>(std::llround(v));
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / std::max<std::size_t>(b, 1)) return std::numeric_limits<std::size_t>::max();
    r *= b;
  }
  return r;
}

// Profile of the previous class on one coarse interval: order bits at interior candidate
// points (bit r for r = 1..R-1) and the distance from the interval end to the next order,
// in the previous class's fine units.
struct Profile {
  std::uint32_t bits = 0;
  int exit_gap = 0;
};

struct ChildState {
  int q;
  std::vector<Profile> profile;
  long lb;
  double offset;
};

struct Entry {
  double cost = kInf;
  std::vector<std::uint32_t> masks;
};

class Solver {
 public:
  Solver(const Instance& inst, const PtasGuess& guess, double eps, const GridSpec& grid, std::size_t cap)
      : inst_(inst), grid_(grid), eps_(eps), cap_(cap) {
    const auto n = inst.size();
    granule_ = eps * inst.capacity() / static_cast<double>(n);
    bound_ = (1.0 + eps) * inst.capacity() * (1.0 + 1e-12);
    members_.assign(grid.levels + 2, {});
    for (std::size_t i = 0; i < n; ++i) {
      int q = guess.class_of.at(i);
      if (q < 1 || q > grid.levels) throw std::invalid_argument("class index outside 1..Q");
      members_[q].push_back(static_cast<int>(i));
    }
    const int S = grid.points;
    const std::size_t per = std::size_t{1} << (S - 1);
    for (int q = 1; q <= grid.levels; ++q) {
      std::size_t joint = ipow(per, static_cast<int>(members_[q].size()));
      if (joint > cap_) throw StateSpaceExceeded("action space at level " + std::to_string(q) + " exceeds cap");
    }
    // Masks always include bit 0 (the coarse point).
    masks_.resize(per);
    gaps_.resize(per);
    for (std::size_t m = 0; m < per; ++m) {
      std::uint32_t mask = static_cast<std::uint32_t>(m << 1 | 1u);
      masks_[m] = mask;
      gaps_[m].resize(S);
      for (int s = 0; s < S; ++s) {
        int nx = s + 1;
        while (nx < S && !(mask >> nx & 1u)) ++nx;
        gaps_[m][s] = nx - s;
      }
    }
  }

  double solve(int q, const std::vector<Profile>& prof, long lb) {
    std::string key = make_key(q, prof, lb);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.cost;
    if (memo_.size() >= cap_) throw StateSpaceExceeded("DP state count exceeds cap");
    memo_[key] = Entry{};  // placeholder; no cycles since q strictly increases

    const auto& mem = members_[q];
    const int S = grid_.points;
    const double unit = grid_.fine_length(q);
    std::vector<double> base(S, static_cast<double>(lb) * granule_);
    add_previous_space(q, prof, base);

    const std::size_t per = masks_.size();
    const std::size_t k = mem.size();
    std::size_t joint = ipow(per, static_cast<int>(k));
    std::vector<std::vector<double>> own_cost(k, std::vector<double>(per));
    for (std::size_t j = 0; j < k; ++j) {
      const auto& c = inst_.commodities()[mem[j]];
      for (std::size_t m = 0; m < per; ++m) {
        double sq = 0.0;
        int pop = 0;
        for (int s = 0; s < S; ++s)
          if (masks_[m] >> s & 1u) {
            ++pop;
            sq += static_cast<double>(gaps_[m][s]) * gaps_[m][s];
          }
        own_cost[j][m] = c.K * pop + c.H * unit * unit * sq;
      }
    }

    Entry best;
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> space(S);
    for (std::size_t code = 0; code < joint; ++code) {
      std::size_t rest = code;
      double cost = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        idx[j] = rest % per;
        rest /= per;
        cost += own_cost[j][idx[j]];
      }
      if (cost >= best.cost) continue;
      bool ok = true;
      for (int s = 0; s < S && ok; ++s) {
        double v = base[s];
        for (std::size_t j = 0; j < k; ++j)
          v += inst_.commodities()[mem[j]].gamma * gaps_[idx[j]][s] * unit;
        ok = v <= bound_;
      }
      if (!ok) continue;
      std::vector<std::uint32_t> chosen(k);
      for (std::size_t j = 0; j < k; ++j) chosen[j] = masks_[idx[j]];
      for (const auto& ch : children(q, prof, lb, chosen)) {
        if (!std::isfinite(cost)) break;
        cost += solve(ch.q, ch.profile, ch.lb);
        if (cost >= best.cost) break;
      }
      if (cost < best.cost) {
        best.cost = cost;
        best.masks = std::move(chosen);
      }
    }
    memo_[key] = best;
    return best.cost;
  }

  void rebuild(int q, const std::vector<Profile>& prof, long lb, double t0, std::map<int, std::vector<double>>& times,
               std::vector<DpNode>& trace) {
    const Entry& e = memo_.at(make_key(q, prof, lb));
    const auto& mem = members_[q];
    const double unit = grid_.fine_length(q);
    trace.push_back({q, t0, grid_.coarse_length(q), static_cast<double>(lb) * granule_});
    for (std::size_t j = 0; j < mem.size(); ++j) {
      int id = inst_.commodities()[mem[j]].id;
      for (int s = 0; s < grid_.points; ++s)
        if (e.masks[j] >> s & 1u) times[id].push_back(t0 + s * unit);
    }
    for (const auto& ch : children(q, prof, lb, e.masks)) rebuild(ch.q, ch.profile, ch.lb, t0 + ch.offset, times, trace);
  }

  std::size_t states() const { return memo_.size(); }

 private:
  std::string make_key(int q, const std::vector<Profile>& prof, long lb) const {
    std::string key;
    key.reserve(12 + 8 * prof.size());
    auto put = [&](std::int64_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(q);
    put(lb);
    for (const auto& p : prof) {
      put(p.bits);
      put(p.exit_gap);
    }
    return key;
  }

  // Space of the previous class at each fine point of level q (just after jumps).
  void add_previous_space(int q, const std::vector<Profile>& prof, std::vector<double>& out) const {
    if (prof.empty()) return;
    const auto& prev = members_[q - 1];
    const int S = grid_.points, G = grid_.growth, R = S / G;
    const double unit = grid_.fine_length(q);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      double gamma = inst_.commodities()[prev[j]].gamma;
      for (int s = 0; s < S; ++s) {
        out[s] += gamma * unit * (next_prev_order(prof[j], s, R, G, S, false) - s);
      }
    }
  }

  // Next previous-class order strictly after (or at, when inclusive) level-q fine index s.
  static int next_prev_order(const Profile& p, int s, int R, int G, int S, bool inclusive) {
    for (int r = 1; r < R; ++r) {
      int pos = r * G;
      if ((inclusive ? pos >= s : pos > s) && (p.bits >> r & 1u)) return pos;
    }
    return S + p.exit_gap * G;
  }

  std::vector<ChildState> children(int q, const std::vector<Profile>& prof, long lb,
                                   const std::vector<std::uint32_t>& masks) const {
    std::vector<ChildState> out;
    const int S = grid_.points, G = grid_.growth, R = S / std::max(G, 1);
    const double unit = grid_.fine_length(q);
    const auto& prev = members_[q - 1 >= 0 ? q - 1 : 0];
    const int Q = grid_.levels;
    if (q + 1 <= Q && !members_[q + 1].empty()) {
      for (int m = 0; m < G; ++m) {
        const int entry = m * R, exit = (m + 1) * R;
        ChildState ch{q + 1, {}, lb, m * grid_.coarse_length(q + 1)};
        for (std::uint32_t mask : masks) {
          Profile p;
          for (int r = 1; r < R; ++r)
            if (mask >> (entry + r) & 1u) p.bits |= 1u << r;
          int nx = exit;
          while (nx < S && !(mask >> nx & 1u)) ++nx;
          p.exit_gap = nx - exit;
          ch.profile.push_back(p);
        }
        double fold = 0.0;
        if (!prof.empty())
          for (std::size_t j = 0; j < prev.size(); ++j)
            fold += inst_.commodities()[prev[j]].gamma * unit * (next_prev_order(prof[j], exit, R, G, S, true) - exit);
        ch.lb = lb + static_cast<long>(std::floor(fold / granule_ + 1e-9));
        out.push_back(std::move(ch));
      }
      return out;
    }
    int qn = 0;
    for (int r = q + 2; r <= Q; ++r)
      if (!members_[r].empty()) {
        qn = r;
        break;
      }
    if (qn == 0) return out;
    // Children sit at level qn; classes q and q-1 never order inside them.
    const std::size_t C = ipow(static_cast<std::size_t>(G), qn - q);
    if (C > cap_) throw StateSpaceExceeded("too many child intervals");
    const long scale = static_cast<long>(C) / S;  // fine units per level-q point
    const double fine = grid_.coarse_length(q) / static_cast<double>(C);
    const auto& cur = members_[q];
    for (std::size_t c = 0; c < C; ++c) {
      const long exit = static_cast<long>(c) + 1;
      double fold = 0.0;
      for (std::size_t j = 0; j < cur.size(); ++j) {
        long nx = S;
        for (int s = 0; s < S; ++s)
          if ((masks[j] >> s & 1u) && s * scale >= exit) {
            nx = s;
            break;
          }
        fold += inst_.commodities()[cur[j]].gamma * fine * static_cast<double>(nx * scale - exit);
      }
      if (!prof.empty())
        for (std::size_t j = 0; j < prev.size(); ++j) {
          long nx = (S + static_cast<long>(prof[j].exit_gap) * G) * scale;
          for (int r = 1; r < R; ++r)
            if ((prof[j].bits >> r & 1u) && r * G * scale >= exit) {
              nx = static_cast<long>(r) * G * scale;
              break;
            }
          fold += inst_.commodities()[prev[j]].gamma * fine * static_cast<double>(nx - exit);
        }
      ChildState ch{qn, {}, lb + static_cast<long>(std::floor(fold / granule_ + 1e-9)),
                    static_cast<double>(c) * fine};
      out.push_back(std::move(ch));
    }
    (void)unit;
    return out;
  }

  const Instance& inst_;
  GridSpec grid_;
  double eps_;
  std::size_t cap_;
  double granule_;
  double bound_;
  std::vector<std::vector<int>> members_;
  std::vector<std::uint32_t> masks_;
  std::vector<std::vector<int>> gaps_;
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

std::size_t GridSpec::coarse_count(int q) const { return ipow(static_cast<std::size_t>(growth), q - 1); }
double GridSpec::coarse_length(int q) const { return tau / static_cast<double>(coarse_count(q)); }
double GridSpec::fine_length(int q) const { return coarse_length(q) / points; }

void GridSpec::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("grid tau must be > 0");
  if (levels < 1) throw std::invalid_argument("grid needs at least one level");
  if (points < 1 || points > 31) throw StateSpaceExceeded("fine points per coarse interval must be in 1..31");
  if (levels >= 2) {
    if (growth < 1 || points % growth != 0) throw std::invalid_argument("grid growth must divide fine points");
  }
  if (levels >= 3 && (static_cast<long>(growth) * growth) % points != 0)
    throw std::invalid_argument("fine points must divide growth squared");
}

GridSpec theory_grid(std::size_t n, double eps, double tau, int levels) {
  double c = std::ceil(static_cast<double>(n) / eps);
  return {tau, levels, clamp_pow(c, 3), clamp_pow(c, 5)};
}

GridSpec resolve_grid(std::size_t n, double eps, double tau, const GridOverrides& o) {
  GridSpec g = theory_grid(n, eps, tau, o.levels.value_or(1));
  if (o.growth) g.growth = *o.growth;
  if (o.points) g.points = *o.points;
  return g;
}

std::vector<double> tau_grid(const Instance& inst, double eps) {
  double M = compute_M(inst);
  double n = static_cast<double>(inst.size());
  double k_max = 0.0, h_min = kInf;
  for (const auto& c : inst.commodities()) {
    k_max = std::max(k_max, c.K);
    h_min = std::min(h_min, c.H);
  }
  double lo = k_max / (2.0 * eps * n * M);
  double hi = 2.0 * n * M / (eps * eps * h_min);
  int J = static_cast<int>(std::ceil(std::log(hi / lo) / std::log1p(eps) - 1e-12));
  std::vector<double> out;
  for (int j = 0; j <= J; ++j) out.push_back(lo * std::pow(1.0 + eps, j));
  return out;
}

std::vector<PtasGuess> enumerate_guesses(const Instance& inst, double eps, std::size_t budget, int levels,
                                         std::size_t max_n) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must be in (0,1)");
  if (inst.size() > max_n) throw std::invalid_argument("instance exceeds the PTAS commodity cap");
  if (levels < 1) throw std::invalid_argument("need at least one frequency class");
  const std::size_t n = inst.size();
  std::size_t count = ipow(static_cast<std::size_t>(levels), static_cast<int>(n));
  if (count > budget) throw BudgetExceeded(count);
  std::vector<PtasGuess> out;
  for (double tau : tau_grid(inst, eps)) {
    for (std::size_t code = 0; code < count; ++code) {
      PtasGuess g{tau, std::vector<int>(n)};
      std::size_t rest = code;
      for (std::size_t i = n; i-- > 0;) {
        g.class_of[i] = static_cast<int>(rest % levels) + 1;
        rest /= levels;
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

DpResult dp_solve(const Instance& inst, const PtasGuess& guess, double eps, const GridOverrides& o) {
  if (guess.class_of.size() != inst.size()) throw std::invalid_argument("guess does not cover the instance");
  GridOverrides eff = o;
  if (!eff.levels) eff.levels = *std::max_element(guess.class_of.begin(), guess.class_of.end());
  DpResult r;
  r.grid = resolve_grid(inst.size(), eps, guess.tau, eff);
  r.grid.validate();
  Solver solver(inst, guess, eps, r.grid, eff.state_cap);
  // Level 1 always runs; with no class-1 commodity it acts as the zero-cost dummy class.
  double cost = solver.solve(1, {}, 0);
  r.states = solver.states();
  if (!std::isfinite(cost)) return r;
  std::map<int, std::vector<double>> times;
  solver.rebuild(1, {}, 0, 0.0, times, r.trace);
  r.policy.tau = guess.tau;
  for (auto& [id, ts] : times) r.policy.schedules[id] = zio_orders(std::move(ts), guess.tau);
  r.cost_rate = cost / guess.tau;
  r.feasible = true;
  return r;
}

bool is_b_aligned(const CyclicPolicy& p, const Instance& inst, const GridSpec& grid,
                  const std::vector<int>& class_of, double tol) {
  const auto& cs = inst.commodities();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto it = p.schedules.find(cs[i].id);
    if (it == p.schedules.end()) return false;
    const int q = class_of.at(i);
    const double fine = grid.fine_length(q), coarse = grid.coarse_length(q);
    std::vector<long> idx;
    for (const auto& o : it->second) {
      double x = o.time / fine;
      double rx = std::round(x);
      if (std::fabs(x - rx) > tol * std::max(1.0, x)) return false;
      idx.push_back(static_cast<long>(rx));
    }
    for (std::size_t k = 0; k < grid.coarse_count(q); ++k) {
      long want = static_cast<long>(k) * grid.points;
      if (!std::binary_search(idx.begin(), idx.end(), want)) return false;
    }
    // Zero inventory just before each order: quantity equals the gap to the next order.
    const auto& os = it->second;
    for (std::size_t k = 0; k < os.size(); ++k) {
      double next = k + 1 < os.size() ? os[k + 1].time : os[0].time + p.tau;
      if (std::fabs(os[k].qty - (next - os[k].time)) > tol * std::max(1.0, coarse)) return false;
    }
  }
  return true;
}

PtasOptions desk_options(std::size_t n) {
  PtasOptions o;
  if (n <= 1) {
    o.growth = 4;
    o.points = 16;
  } else if (n == 2) {
    o.growth = 4;
    o.points = 8;
  } else {
    o.growth = 2;
    o.points = 4;
  }
  return o;
}

PtasResult ptas_solve(const Instance& inst, double eps, const PtasOptions& opt) {
  auto guesses = enumerate_guesses(inst, eps, opt.guess_budget, opt.levels, opt.max_n);
  GridOverrides ov;
  ov.levels = opt.levels;
  ov.growth = opt.growth;
  ov.points = opt.points;
  ov.state_cap = opt.state_cap;
  PtasResult best;
  double best_cost = kInf;
  for (const auto& g : guesses) {
    DpResult dp = dp_solve(inst, g, eps, ov);
    if (!dp.feasible) continue;
    EvalReport rep = evaluate(dp.policy, inst);
    double scale = std::max(1.0, rep.v_max / inst.capacity() * (1.0 + 1e-12));
    CyclicPolicy pol = scale > 1.0 ? scale_policy(dp.policy, 1.0 / scale) : dp.policy;
    if (scale > 1.0) rep = evaluate(pol, inst);
    if (rep.total_cost_rate < best_cost) {
      best_cost = rep.total_cost_rate;
      best.policy = std::move(pol);
      best.report = rep;
      best.guess = g;
      best.grid = dp.grid;
      best.dp_cost_rate = dp.cost_rate;
      best.scale = scale;
    }
  }
  if (!std::isfinite(best_cost)) throw std::runtime_error("no guess produced an extendable policy");
  return best;
}

}  // namespace ewls
