#include "ewls/partition_matching.hpp"

#include <cmath>
#include <deque>
#include <functional>
#include <limits>

#include "ewls/eoq.hpp"
#include "ewls/errors.hpp"

namespace ewls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void precheck(const MatchingInstance& mi) {
  long lo = 0, hi = 0;
  for (int ell : mi.classes) {
    auto it = mi.degree_bounds.find(ell);
    if (it == mi.degree_bounds.end()) throw InfeasibleMatching("no degree bounds for class " + class_name(ell));
    auto [l, u] = it->second;
    if (l < 0 || l > u) throw InfeasibleMatching("bad degree bounds for class " + class_name(ell));
    lo += l;
    hi += u;
  }
  for (const auto& [key, w] : mi.weights)
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("matching weight must be finite and >= 0");
  auto n = static_cast<long>(mi.commodities.size());
  if (lo > n || n > hi) throw InfeasibleMatching("degree bounds cannot cover the commodity side");
}

struct Flow {
  struct Edge {
    int to;
    int cap;
    double cost;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj;
  explicit Flow(int n) : adj(n) {}
  int add(int u, int v, int cap, double cost) {
    adj[u].push_back(static_cast<int>(edges.size()));
    edges.push_back({v, cap, cost});
    adj[v].push_back(static_cast<int>(edges.size()));
    edges.push_back({u, 0, -cost});
    return static_cast<int>(edges.size()) - 2;
  }
  // Successive shortest paths with SPFA; returns pushed flow.
  int run(int s, int t, int want) {
    int pushed = 0;
    const int n = static_cast<int>(adj.size());
    while (pushed < want) {
      std::vector<double> dist(n, kInf);
      std::vector<int> via(n, -1);
      std::vector<char> queued(n, 0);
      std::deque<int> q{s};
      dist[s] = 0.0;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        queued[u] = 0;
        for (int e : adj[u]) {
          const auto& ed = edges[e];
          if (ed.cap > 0 && dist[u] + ed.cost < dist[ed.to] - 1e-12) {
            dist[ed.to] = dist[u] + ed.cost;
            via[ed.to] = e;
            if (!queued[ed.to]) {
              queued[ed.to] = 1;
              q.push_back(ed.to);
            }
          }
        }
      }
      if (dist[t] == kInf) break;
      int f = want - pushed;
      for (int v = t; v != s; v = edges[via[v] ^ 1].to) f = std::min(f, edges[via[v]].cap);
      for (int v = t; v != s; v = edges[via[v] ^ 1].to) {
        edges[via[v]].cap -= f;
        edges[via[v] ^ 1].cap += f;
      }
      pushed += f;
    }
    return pushed;
  }
};

MimickingPartition finish(const MatchingInstance& mi, std::map<int, int> assignment) {
  MimickingPartition p;
  p.assignment = std::move(assignment);
  for (const auto& [id, ell] : p.assignment) {
    p.total_weight += mi.weights.at({id, ell});
    auto it = mi.intervals.find({id, ell});
    if (it != mi.intervals.end()) p.intervals[id] = it->second;
  }
  return p;
}

}  // namespace

std::string class_name(int ell) { return ell == kInfClass ? "inf" : std::to_string(ell); }

EdgeWeight edge_weight(const Commodity& c, int ell, double eps, double V, std::size_t n) {
  double cap = ell == kInfClass ? 2.0 * eps * V / (static_cast<double>(n) * c.gamma)
                                : 2.0 * V / (std::pow(1.0 + eps, ell - 1) * c.gamma);
  EoqSolution s = constrained_interval(c.K, c.H, cap);
  return {s.interval, s.cost_rate};
}

MimickingPartition solve_b_matching(const MatchingInstance& mi) {
  precheck(mi);
  const int u = static_cast<int>(mi.commodities.size());
  const int k = static_cast<int>(mi.classes.size());
  const int super_s = 0, s = 1, first_c = 2, first_l = 2 + u, t = 2 + u + k, super_t = t + 1;
  Flow g(super_t + 1);
  g.add(super_s, s, u, 0.0);
  std::map<int, int> edge_of;  // edge index -> (commodity index * k + class index)
  for (int i = 0; i < u; ++i) {
    g.add(s, first_c + i, 1, 0.0);
    for (int j = 0; j < k; ++j) {
      auto it = mi.weights.find({mi.commodities[i], mi.classes[j]});
      if (it == mi.weights.end()) continue;
      edge_of[g.add(first_c + i, first_l + j, 1, it->second)] = i * k + j;
    }
  }
  int lower_total = 0;
  for (int j = 0; j < k; ++j) {
    auto [lo, hi] = mi.degree_bounds.at(mi.classes[j]);
    lower_total += lo;
    if (hi > lo) g.add(first_l + j, t, hi - lo, 0.0);
    if (lo > 0) g.add(first_l + j, super_t, lo, 0.0);
  }
  if (u > lower_total) g.add(t, super_t, u - lower_total, 0.0);
  if (g.run(super_s, super_t, u) < u) throw InfeasibleMatching("no degree-feasible assignment");
  std::map<int, int> assignment;
  for (const auto& [e, ij] : edge_of)
    if (g.edges[e].cap == 0) assignment[mi.commodities[ij / k]] = mi.classes[ij % k];
  return finish(mi, std::move(assignment));
}

MimickingPartition exhaustive_b_matching(const MatchingInstance& mi) {
  precheck(mi);
  const std::size_t u = mi.commodities.size();
  std::map<int, int> load, cur, best;
  double best_w = kInf;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double w) {
    if (i == u) {
      for (int ell : mi.classes) {
        auto [lo, hi] = mi.degree_bounds.at(ell);
        if (load[ell] < lo || load[ell] > hi) return;
      }
      if (w < best_w) {
        best_w = w;
        best = cur;
      }
      return;
    }
    int id = mi.commodities[i];
    for (int ell : mi.classes) {
      auto it = mi.weights.find({id, ell});
      if (it == mi.weights.end() || load[ell] >= mi.degree_bounds.at(ell).second) continue;
      ++load[ell];
      cur[id] = ell;
      rec(i + 1, w + it->second);
      --load[ell];
    }
    cur.erase(id);
  };
  rec(0, 0.0);
  if (best_w == kInf) throw InfeasibleMatching("no degree-feasible assignment");
  return finish(mi, best);
}

}  // namespace ewls
