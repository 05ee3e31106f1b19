#pragma once

#include <json.hpp>

#include "ifes/banach.hpp"
#include "ifes/classes.hpp"
#include "ifes/tarski.hpp"

namespace ifes {

void to_json(nlohmann::json& j, const Residual& r);
void to_json(nlohmann::json& j, const MembershipVerdict& v);
void to_json(nlohmann::json& j, const HypothesisItem& item);
void to_json(nlohmann::json& j, const HypothesisReport& report);
void to_json(nlohmann::json& j, const DerivedConstants& c);
void to_json(nlohmann::json& j, const SolveReport& report);
void to_json(nlohmann::json& j, const PathResult& path);
void to_json(nlohmann::json& j, const UniquenessVerdict& v);

}  // namespace ifes
