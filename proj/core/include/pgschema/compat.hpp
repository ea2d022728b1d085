#pragma once

#include <string>
#include <vector>

#include "pgschema/diff.hpp"

namespace pgschema {

struct CompatViolation {
    ChangeRecord record;
    std::string reason;
};

struct CompatReport {
    std::vector<CompatViolation> violations;

    bool compatible() const noexcept { return violations.empty(); }
};

// Additive-only rule. Removals, datatype narrowing, optional->required,
// cardinality tightening, endpoint changes, new required properties on
// existing types and new edge types demanding edges (min > 0) all violate it.
CompatReport check_compat(const SchemaDiff& diff);

nlohmann::json to_json(const CompatReport& report);

}  // namespace pgschema
