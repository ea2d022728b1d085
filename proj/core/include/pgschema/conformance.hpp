#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pgschema/graph.hpp"
#include "pgschema/schema.hpp"

namespace pgschema {

enum class ViolationKind {
    UnknownType,
    MissingRequiredProperty,
    WrongDatatype,
    UnknownProperty,
    EndpointMismatch,
    CardinalityViolation,
};

std::string_view to_string(ViolationKind kind);  // "unknown-type", ...

struct Violation {
    std::string element_id;
    ViolationKind kind;
    std::string message;
};

struct ConformanceReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

struct ConformanceOptions {
    // Undeclared properties are tolerated when set.
    bool open_world = false;
};

// Nodes are typed by exact label-set match; edges by (label set, source
// type, target type). Cardinalities are counted per endpoint instance.
ConformanceReport validate_conformance(const PropertyGraph& graph, const SchemaGraph& schema,
                                       const ConformanceOptions& options = {});

}  // namespace pgschema
