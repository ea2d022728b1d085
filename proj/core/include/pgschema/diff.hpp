#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgschema/schema.hpp"

namespace pgschema {

enum class ChangeKind {
    AddedNodeType,
    RemovedNodeType,
    AddedEdgeType,
    RemovedEdgeType,
    AddedProperty,
    RemovedProperty,
    ChangedPropertyType,
    ChangedPropertyRequired,
    ChangedCardinality,
    ChangedSupertype,
    ChangedEdgeEndpoints,
};

std::string_view to_string(ChangeKind kind);
std::optional<ChangeKind> parse_change_kind(std::string_view text);

// What a record is about: a node type (by display name) or an edge type (by
// key), optionally narrowed to one property.
struct Subject {
    std::variant<std::string, EdgeKey> type;
    std::optional<std::string> key;

    // "Person", "Person.age", "WORKS_AT(Person->Company)", ".../since".
    std::string to_string() const;
    static std::optional<Subject> parse(std::string_view text);

    friend bool operator==(const Subject&, const Subject&) = default;
};

// Type declarations by public identity, independent of session ids.
struct NodeDecl {
    LabelSet labels;
    std::optional<std::string> supertype;
    std::vector<PropertyDef> properties;

    friend bool operator==(const NodeDecl&, const NodeDecl&) = default;
};

struct EdgeDecl {
    EdgeKey key;
    std::vector<PropertyDef> properties;
    Cardinality out_card;
    Cardinality in_card;

    friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

struct CardinalityPair {
    Cardinality out_card;
    Cardinality in_card;

    friend bool operator==(const CardinalityPair&, const CardinalityPair&) = default;
};

struct SupertypeRef {
    std::optional<std::string> name;

    friend bool operator==(const SupertypeRef&, const SupertypeRef&) = default;
};

struct Endpoints {
    std::string src;
    std::string dst;

    friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

using Payload = std::variant<std::monostate, NodeDecl, EdgeDecl, PropertyDef, DataType, bool,
                             CardinalityPair, SupertypeRef, Endpoints>;

// Payload shape per kind:
//   Added/RemovedNodeType      after/before = NodeDecl
//   Added/RemovedEdgeType      after/before = EdgeDecl
//   Added/RemovedProperty      after/before = PropertyDef
//   ChangedPropertyType        DataType -> DataType
//   ChangedPropertyRequired    bool -> bool
//   ChangedCardinality         CardinalityPair -> CardinalityPair
//   ChangedSupertype           SupertypeRef -> SupertypeRef
//   ChangedEdgeEndpoints       Endpoints -> Endpoints (subject is the old key)
struct ChangeRecord {
    ChangeKind kind;
    Subject subject;
    Payload before;
    Payload after;

    friend bool operator==(const ChangeRecord&, const ChangeRecord&) = default;
};

// Removals, then additions, then changes; each group sorted by subject.
struct SchemaDiff {
    std::vector<ChangeRecord> records;

    bool empty() const noexcept { return records.empty(); }

    friend bool operator==(const SchemaDiff&, const SchemaDiff&) = default;
};

// Types are matched by display name, edge types by key and properties by
// name. An edge whose label is unmatched exactly once on each side and that
// differs only in its endpoints becomes ChangedEdgeEndpoints.
SchemaDiff compute_diff(const SchemaGraph& before, const SchemaGraph& after);

// Throws SchemaError(Conflict) naming the first record that does not apply.
SchemaGraph apply_diff(const SchemaGraph& base, const SchemaDiff& diff);

// One English sentence per record.
std::vector<std::string> render_semantic(const SchemaDiff& diff);
std::string render_semantic(const ChangeRecord& record);

// Unified-style line diff: every line prefixed with ' ', '-' or '+'.
std::vector<std::string> render_raw(std::string_view before, std::string_view after);

enum class ChangeStatus { Unchanged, Added, Removed, Modified };

std::string_view to_string(ChangeStatus status);
std::string_view symbol_of(ChangeStatus status);  // "", "+", "-", "~"

struct ElementAnnotation {
    ChangeStatus status = ChangeStatus::Unchanged;
    std::string symbol;

    friend bool operator==(const ElementAnnotation&, const ElementAnnotation&) = default;
};

// Keyed by node display name or edge key string.
using VisualAnnotation = std::map<std::string, ElementAnnotation>;

VisualAnnotation annotate_visual(const SchemaGraph& before, const SchemaGraph& after,
                                 const SchemaDiff& diff);

// Wire form: array of {"kind","subject","before","after"}.
nlohmann::json to_json(const ChangeRecord& record);
nlohmann::json to_json(const SchemaDiff& diff);
nlohmann::json to_json(const VisualAnnotation& annotation);
SchemaDiff diff_from_json(const nlohmann::json& json);

}  // namespace pgschema
