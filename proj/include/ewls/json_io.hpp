#pragma once

#include <string>

#include "json.hpp"

#include "ewls/evaluator.hpp"
#include "ewls/model.hpp"
#include "ewls/relaxation.hpp"

namespace ewls {

// Parsers throw SchemaError (with a field path) on shape problems and ValueError on bad values.
Instance parse_instance(const std::string& text);
Instance instance_from_json(const nlohmann::json& j);
std::string serialize_instance(const Instance& inst);
nlohmann::ordered_json instance_to_json(const Instance& inst);

// {"tau": t, "schedules": {"<id>": [[t, q], ...]}}
CyclicPolicy policy_from_json(const nlohmann::json& j);
nlohmann::ordered_json policy_to_json(const CyclicPolicy& p);

// A single cyclic object, or {"components": [cyclic, ...]}.
GluedPolicy glued_from_json(const nlohmann::json& j);
nlohmann::ordered_json glued_to_json(const GluedPolicy& g);

nlohmann::ordered_json report_to_json(const EvalReport& r);
nlohmann::ordered_json relaxation_to_json(const RelaxationSolution& s);

}  // namespace ewls
