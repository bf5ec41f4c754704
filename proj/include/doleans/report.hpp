#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "doleans/conditions.hpp"

namespace doleans {

using Json = nlohmann::ordered_json;

/// {condition, verdict, estimate:{mean,se,n}, divergence:{levels,values,
/// slope,model}, quadrature}; absent parts are null. The condition object
/// also records model, seed, stream count, Monte Carlo size and any level
/// override so a report is self-describing.
Json report_to_json(const ConditionReport& report);

/// report_to_json pretty-printed with a trailing newline.
std::string report_json_string(const ConditionReport& report);

/// "# key: value" header lines, then "level,value" rows of the divergence
/// evidence (no rows when there is none).
std::string report_csv(const ConditionReport& report);

/// {horizon, jumps:[{t,dm}], drift_kind, cont_qv_kind}.
Json path_to_json(const JumpPath& path);

/// Inverse of path_to_json; the result is validated. Throws
/// std::invalid_argument on malformed input.
JumpPath path_from_json(const Json& j);

}  // namespace doleans
