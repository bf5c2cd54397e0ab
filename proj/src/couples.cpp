#include "ewls/couples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ewls/errors.hpp"

namespace ewls {

namespace {

Rational pow2_inv(int k) { return Rational(1, std::int64_t{1} << k); }

// Orders back to back from `start`, times wrapped into [0, cycle).
ExactOrders lay_out(Rational start, const std::vector<Rational>& quantities, Rational cycle) {
  ExactOrders out;
  Rational t = start;
  for (const auto& q : quantities) {
    Rational w = t >= cycle ? t - cycle : t;
    out.emplace_back(w, q);
    t += q;
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::vector<Rational> repeat(const Rational& q, std::int64_t count) {
  return std::vector<Rational>(static_cast<std::size_t>(count), q);
}

void append(std::vector<Rational>& dst, const std::vector<Rational>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace

int couple_case(int k) {
  if (k < 0) throw NotAPowerOfTwo("negative exponent");
  return k >= 5 ? 6 : k + 1;
}

std::pair<Rational, Rational> claimed_ratios(int case_id) {
  switch (case_id) {
    case 1: return {Rational(3, 2), Rational(1)};
    case 2: return {Rational(5, 3), Rational(1)};
    case 3: return {Rational(27, 16), Rational(32, 31)};
    case 4: return {Rational(2201, 1280), Rational(32, 31)};
    case 5: return {Rational(7, 4), Rational(32, 31)};
    case 6: return {Rational(7, 4), Rational(33, 32)};
  }
  throw std::out_of_range("couple case " + std::to_string(case_id));
}

namespace {

CyclicPolicy exact_policy(const CoupleSchedule& s, int a, int b, double T_A) {
  auto convert = [&](const ExactOrders& xs) {
    std::vector<Order> out;
    out.reserve(xs.size());
    for (const auto& [t, q] : xs) out.push_back({t.to_double() * T_A, q.to_double() * T_A});
    return out;
  };
  CyclicPolicy p;
  p.tau = s.exact_cycle.to_double() * T_A;
  p.schedules[a] = convert(s.exact_a);
  p.schedules[b] = convert(s.exact_b);
  return p;
}

}  // namespace

CoupleSchedule normalized_couple(int k) {
  CoupleSchedule s;
  s.k = k;
  s.case_id = couple_case(k);
  std::tie(s.claimed_vmax_ratio, s.claimed_cost_ratio) = claimed_ratios(s.case_id);
  const Rational tb = pow2_inv(k);
  const Rational scaled(31, 32);
  std::vector<Rational> qb;
  Rational start(0);
  switch (s.case_id) {
    case 1:
      s.exact_cycle = Rational(1);
      start = Rational(1, 2);
      qb = {Rational(1)};
      break;
    case 2:
      s.exact_cycle = Rational(1);
      start = Rational(1, 3);
      qb = {Rational(1, 2), Rational(1, 2)};
      break;
    case 3:
      s.exact_cycle = scaled;
      start = Rational(5, 32);
      qb = {Rational(7, 8) * tb, tb, tb, tb};
      break;
    case 4:
      s.exact_cycle = scaled;
      start = Rational(3, 32);
      for (const auto& f : {Rational(27, 32), Rational(19, 20), Rational(1), Rational(1), Rational(1),
                            Rational(1), Rational(153, 160), Rational(1)})
        qb.push_back(f * tb);
      break;
    case 5:
      s.exact_cycle = scaled;
      append(qb, repeat(Rational(3, 4) * tb, 6));
      append(qb, repeat(tb, 7));
      append(qb, repeat(Rational(4, 3) * tb, 3));
      break;
    default: {
      s.exact_cycle = Rational(1);
      const std::int64_t m = std::int64_t{1} << k;  // 1 / T_B
      append(qb, repeat(Rational(3, 4) * tb, m / 2));
      append(qb, repeat(tb, m / 4));
      append(qb, repeat(Rational(4, 3) * tb, 9 * m / 32));
      break;
    }
  }
  s.exact_a = {{Rational(0), s.exact_cycle}};
  s.exact_b = lay_out(start, qb, s.exact_cycle);
  s.policy = exact_policy(s, 0, 1, 1.0);
  return s;
}

CoupleSchedule synthesize_couple(const CoupleInput& in, int max_k) {
  if (in.a.id == in.b.id) throw std::invalid_argument("couple needs two distinct commodities");
  if (!(in.T_A > 0.0 && in.T_B > 0.0)) throw std::invalid_argument("couple intervals must be > 0");
  double r = std::log2(in.T_A) - std::log2(in.T_B);
  double kr = std::round(r);
  if (std::fabs(r - kr) > 1e-9 || kr < 0.0) throw NotAPowerOfTwo("T_A/T_B = 2^" + std::to_string(r));
  int k = static_cast<int>(kr);
  if (k > max_k) throw std::length_error("couple exponent " + std::to_string(k) + " above cap");
  double space = (in.a.gamma * in.T_A) / (in.b.gamma * in.T_B);
  double slack = 1.0 + in.eps;
  if (space > slack * (1.0 + 1e-12) || space < (1.0 - 1e-12) / slack)
    throw SpaceMismatch("gamma_A T_A / gamma_B T_B = " + std::to_string(space));

  CoupleSchedule s = normalized_couple(k);
  s.policy = exact_policy(s, in.a.id, in.b.id, in.T_A);
  return s;
}

PairClassification classify_pairs(std::vector<GroupEntry> group, double eps) {
  std::sort(group.begin(), group.end(), [](const GroupEntry& x, const GroupEntry& y) {
    double vx = x.gamma * x.T, vy = y.gamma * y.T;
    if (vx != vy) return vx > vy;
    return x.id < y.id;
  });
  PairClassification out;
  std::size_t i = 0;
  for (; i + 1 < group.size(); i += 2) {
    const auto& lead = group[i];
    const auto& trail = group[i + 1];
    bool far = lead.gamma * lead.T >= (1.0 + eps) * trail.gamma * trail.T;
    (far ? out.far : out.near).emplace_back(lead.id, trail.id);
  }
  if (i < group.size()) out.leftover = group[i].id;
  return out;
}

}  // namespace ewls
