#include "ewls/json_io.hpp"

#include "ewls/errors.hpp"

namespace ewls {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<int>();
}

CyclicPolicy policy_at(const json& j, const std::string& path) {
  CyclicPolicy p;
  p.tau = number(field(j, "tau", path), path + ".tau");
  const json& sched = field(j, "schedules", path);
  if (!sched.is_object()) throw SchemaError(path + ".schedules", "expected an object");
  for (auto it = sched.begin(); it != sched.end(); ++it) {
    std::string at = path + ".schedules." + it.key();
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw SchemaError(at, "key is not an integer id");
    }
    if (!it->is_array()) throw SchemaError(at, "expected an array of [t, q]");
    auto& orders = p.schedules[id];
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& o = (*it)[k];
      std::string ok = at + "[" + std::to_string(k) + "]";
      if (!o.is_array() || o.size() != 2) throw SchemaError(ok, "expected [t, q]");
      orders.push_back({number(o[0], ok + "[0]"), number(o[1], ok + "[1]")});
    }
  }
  validate_policy(p);
  return p;
}

}  // namespace

Instance instance_from_json(const json& j) {
  double V = number(field(j, "capacity", "$"), "$.capacity");
  const json& cs = field(j, "commodities", "$");
  if (!cs.is_array()) throw SchemaError("$.commodities", "expected an array");
  std::vector<Commodity> out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::string at = "$.commodities[" + std::to_string(i) + "]";
    const json& c = cs[i];
    Commodity x;
    x.id = integer(field(c, "id", at), at + ".id");
    x.K = number(field(c, "K", at), at + ".K");
    x.H = number(field(c, "H", at), at + ".H");
    x.gamma = number(field(c, "gamma", at), at + ".gamma");
    out.push_back(x);
  }
  return Instance(V, std::move(out));
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", e.what());
  }
  return instance_from_json(j);
}

ordered_json instance_to_json(const Instance& inst) {
  ordered_json j;
  j["capacity"] = inst.capacity();
  j["commodities"] = ordered_json::array();
  for (const auto& c : inst.commodities())
    j["commodities"].push_back({{"id", c.id}, {"K", c.K}, {"H", c.H}, {"gamma", c.gamma}});
  return j;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

CyclicPolicy policy_from_json(const json& j) { return policy_at(j, "$"); }

ordered_json policy_to_json(const CyclicPolicy& p) {
  ordered_json j;
  j["tau"] = p.tau;
  j["schedules"] = ordered_json::object();
  for (const auto& [id, orders] : p.schedules) {
    ordered_json arr = ordered_json::array();
    for (const auto& o : orders) arr.push_back({o.time, o.qty});
    j["schedules"][std::to_string(id)] = arr;
  }
  return j;
}

GluedPolicy glued_from_json(const json& j) {
  GluedPolicy g;
  if (j.is_object() && j.contains("components")) {
    const json& cs = j["components"];
    if (!cs.is_array()) throw SchemaError("$.components", "expected an array");
    for (std::size_t i = 0; i < cs.size(); ++i)
      g.components.push_back(policy_at(cs[i], "$.components[" + std::to_string(i) + "]"));
    return g;
  }
  g.components.push_back(policy_from_json(j));
  return g;
}

ordered_json glued_to_json(const GluedPolicy& g) {
  ordered_json j;
  j["components"] = ordered_json::array();
  for (const auto& c : g.components) j["components"].push_back(policy_to_json(c));
  return j;
}

ordered_json report_to_json(const EvalReport& r) {
  ordered_json j;
  j["ordering_cost_rate"] = r.ordering_cost_rate;
  j["holding_cost_rate"] = r.holding_cost_rate;
  j["total_cost_rate"] = r.total_cost_rate;
  j["v_max"] = r.v_max;
  ordered_json avg = ordered_json::object();
  for (const auto& [id, v] : r.avg_inventory) avg[std::to_string(id)] = v;
  j["avg_inventory"] = avg;
  j["feasible_at"] = r.feasible_at;
  j["feasible"] = r.feasible;
  return j;
}

ordered_json relaxation_to_json(const RelaxationSolution& s) {
  ordered_json j;
  ordered_json iv = ordered_json::object();
  for (const auto& [id, T] : s.intervals) iv[std::to_string(id)] = T;
  j["intervals"] = iv;
  j["lambda"] = s.lambda;
  j["objective"] = s.objective;
  j["budget_used"] = s.budget_used;
  j["budget_cap"] = s.budget_cap;
  return j;
}

}  // namespace ewls
