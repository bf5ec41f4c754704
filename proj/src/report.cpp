#include "doleans/report.hpp"

#include <sstream>
#include <stdexcept>

#include "doleans/text.hpp"

namespace doleans {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json condition_json(const ConditionReport& r) {
  const ConditionSpec& spec = r.condition;
  Json c;
  c["kind"] = std::string(to_string(spec.kind()));
  c["description"] = spec.describe();
  c["control"] = spec.control() ? Json(spec.control()->describe()) : Json(nullptr);
  c["eps"] = optional_number(spec.epsilon());
  c["model"] = r.model;
  c["seed"] = r.seeds.seed;
  c["streams"] = r.seeds.streams;
  c["mc_samples"] = r.options.mc_samples;
  c["levels"] = r.options.levels ? Json(*r.options.levels) : Json(nullptr);
  return c;
}

}  // namespace

Json report_to_json(const ConditionReport& r) {
  Json j;
  j["condition"] = condition_json(r);
  j["verdict"] = std::string(to_string(r.verdict));
  if (r.estimate) {
    j["estimate"] = Json{{"mean", r.estimate->mean}, {"se", r.estimate->se}, {"n", r.estimate->n}};
  } else {
    j["estimate"] = nullptr;
  }
  if (r.divergence) {
    j["divergence"] = Json{{"levels", r.divergence->levels},
                           {"values", r.divergence->values},
                           {"slope", r.divergence->slope},
                           {"model", std::string(to_string(r.divergence->model))}};
  } else {
    j["divergence"] = nullptr;
  }
  j["quadrature"] = optional_number(r.quadrature);
  return j;
}

std::string report_json_string(const ConditionReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::string report_csv(const ConditionReport& r) {
  std::ostringstream out;
  out << "# model: " << r.model << "\n";
  out << "# condition: " << r.condition.describe() << "\n";
  out << "# seed: " << r.seeds.seed << "\n";
  out << "# verdict: " << to_string(r.verdict) << "\n";
  if (r.divergence) out << "# growth: " << to_string(r.divergence->model) << "\n";
  out << "level,value\n";
  if (r.divergence) {
    for (std::size_t i = 0; i < r.divergence->levels.size(); ++i)
      out << format_double(r.divergence->levels[i]) << "," << format_double(r.divergence->values[i]) << "\n";
  }
  return out.str();
}

Json path_to_json(const JumpPath& path) {
  Json jumps = Json::array();
  for (const Jump& jmp : path.jumps) jumps.push_back(Json{{"t", jmp.time}, {"dm", jmp.size}});
  return Json{{"horizon", path.horizon},
              {"jumps", jumps},
              {"drift_kind", path.drift.tag()},
              {"cont_qv_kind", path.cont_qv.tag()}};
}

JumpPath path_from_json(const Json& j) {
  try {
    JumpPath p;
    p.horizon = j.at("horizon").get<double>();
    for (const auto& jmp : j.at("jumps")) p.jumps.push_back({jmp.at("t").get<double>(), jmp.at("dm").get<double>()});
    p.drift = Drift::parse(j.at("drift_kind").get<std::string>());
    p.cont_qv = ContinuousQv::parse(j.at("cont_qv_kind").get<std::string>());
    validate(p);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed path JSON: ") + e.what());
  }
}

}  // namespace doleans
