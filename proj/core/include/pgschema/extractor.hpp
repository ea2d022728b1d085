#pragma once

#include <span>

#include "pgschema/graph.hpp"
#include "pgschema/schema.hpp"

namespace pgschema {

struct ExtractionOptions {
    bool infer_cardinality = true;
    bool infer_subtypes = false;
    bool open_world = false;  // carried through to validation by callers
};

// Label-set based extraction: one node type per distinct node label set, one
// edge type per (edge label set, source type, target type). The result always
// validates the input graph.
SchemaGraph extract_schema(const PropertyGraph& graph, const ExtractionOptions& options = {});

// Fold of least_common_supertype over the value kinds. Throws
// SchemaError(Precondition) on empty input.
DataType infer_property_type(std::span<const PropertyValue> values);

// Adds supertype links from each node type to the largest type whose label
// set is a strict subset and whose required property names are a subset of
// its own. Types that already have a supertype are left alone.
SchemaGraph infer_subtypes(const SchemaGraph& schema);

}  // namespace pgschema
