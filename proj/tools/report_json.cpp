#include "report_json.hpp"

namespace ifes {

using nlohmann::json;

void to_json(json& j, const Residual& r) { j = json{{"value", r.value}, {"at", r.at}}; }

void to_json(json& j, const MembershipVerdict& v) {
  j = json{{"member", v.member}, {"reason", v.reason}};
  if (v.witness) j["witness"] = {v.witness->first, v.witness->second};
}

void to_json(json& j, const HypothesisItem& item) {
  j = json{{"name", item.name},
           {"passed", item.passed},
           {"detail", item.detail},
           {"evidence", item.sampled ? "sampled" : "exact"}};
}

void to_json(json& j, const HypothesisReport& report) {
  j = json{{"path", report.path}, {"all_passed", report.all_passed()}, {"items", report.items}};
}

void to_json(json& j, const DerivedConstants& c) {
  j = json{{"lambda_sum", c.lambda_sum}, {"K0", c.K0}, {"K1", c.K1}, {"K", c.K}};
}

void to_json(json& j, const SolveReport& r) {
  j = json{{"iterations", r.iterations},
           {"final_step", r.final_step},
           {"converged", r.converged},
           {"residual", r.residual},
           {"class_verdict", r.class_verdict},
           {"contraction_estimate", r.contraction_estimate},
           {"steps_nonincreasing", r.steps_nonincreasing},
           {"clamp_count", r.clamp_count},
           {"step_history", r.step_history}};
}

void to_json(json& j, const PathResult& p) {
  j = json{{"sweeps", p.sweeps},
           {"certified", p.certified},
           {"certificate", p.certificate},
           {"residual", p.residual},
           {"fixed_point_defect", p.fixed_point_defect},
           {"clamps", p.clamps},
           {"monotone", p.g.is_monotone()}};
}

void to_json(json& j, const UniquenessVerdict& v) {
  j = json{{"status", to_string(v.status)},
           {"distance", v.distance},
           {"residual1", v.residual1},
           {"residual2", v.residual2},
           {"probe_samples", v.probe_samples},
           {"detail", v.detail}};
  if (v.witness) j["witness"] = *v.witness;
}

}  // namespace ifes
