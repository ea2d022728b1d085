#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgschema/schema.hpp"

namespace pgschema {

// Byte range [start, end) of one declaration in serialized text.
struct SourceSpan {
    std::string element_id;
    std::size_t start = 0;
    std::size_t end = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ParseError {
    std::size_t line = 1;    // 1-based
    std::size_t column = 1;  // 1-based, in bytes
    std::string message;
    std::string expected;    // hint, may be empty

    std::string to_string() const;  // "3:14: message (expected ...)"
};

struct ParseResult {
    std::optional<SchemaGraph> schema;
    std::vector<ParseError> errors;

    bool ok() const noexcept { return schema.has_value(); }
};

// Parses the `.pgs` schema language:
//
//   NODE Person { name: STRING, age: INTEGER? }
//   NODE Person&Employee : Person { parkingSpot: STRING }
//   EDGE (Person)-[WORKS_AT<0..*> { since: DATE }]-><1..1>(Company)
//
// The cardinality after the label is the in-cardinality (edges per target
// node), the one after `]->` is the out-cardinality (edges per source node);
// both default to 0..*. Errors are reported in one pass where possible.
ParseResult parse_schema(std::string_view text);

// Throws SchemaError(Precondition) listing the parse errors.
SchemaGraph parse_schema_or_throw(std::string_view text);

struct SerializedSchema {
    std::string text;
    std::vector<SourceSpan> spans;  // one per node and edge type, in text order
};

// Canonical text: node types then edge types, sorted per canonicalize,
// two-space indent, one property per line when a type has more than two.
SerializedSchema serialize_schema(const SchemaGraph& schema);

// Throws SchemaError(UnknownElement) when the id has no span.
const SourceSpan& span_of(const std::vector<SourceSpan>& spans, std::string_view element_id);

}  // namespace pgschema
