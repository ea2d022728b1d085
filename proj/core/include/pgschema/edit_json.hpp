#pragma once

#include <nlohmann/json.hpp>

#include "pgschema/refine.hpp"

namespace pgschema {

// JSON command form of edits, e.g.
//   {"op":"split","type":"Person","discriminator":"parkingSpot",
//    "with":"Employee","without":"Guest"}
// Edge references are either an id string or {"label","src","dst"}; property
// owners are a node name string or an edge reference object.
// Throws SchemaError(Precondition) on malformed commands.
Edit edit_from_json(const nlohmann::json& command);
nlohmann::json edit_to_json(const Edit& edit);

}  // namespace pgschema
