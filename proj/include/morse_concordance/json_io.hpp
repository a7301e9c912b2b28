#pragma once

#include <json.hpp>

#include "morse_concordance/fold_diagram.hpp"
#include "morse_concordance/invariants.hpp"
#include "morse_concordance/morse_data.hpp"

namespace morse_concordance::json_io {

using nlohmann::json;

/// {"dimension", "euler_characteristic", "orientable", "connected", "nu",
/// "label"}; unknown fields are rejected with Error("parse_error").
MorseFunctionRecord record_from_json(const json& j);
json to_json(const MorseFunctionRecord& r);

/// {"n", "components": [{"shape", "endpoints": [{"side", "index"}],
/// "segments": [{"abs_index", "turnings"}], "cusps": [{"abs_index"}]}]}.
ConcordanceDiagram diagram_from_json(const json& j);
json to_json(const ConcordanceDiagram& d);

json to_json(const CriticalVector& v);
json to_json(const ConcordanceClass& c);
json to_json(const ValidationReport& r);
json to_json(const DiagramReport& r);
json to_json(const CongruenceReport& r);

}  // namespace morse_concordance::json_io
