#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgschema/graph.hpp"

namespace pgschema {

// Property datatypes. ANY is the top; INTEGER sits below FLOAT; every other
// type is only below ANY.
enum class DataType { String, Integer, Float, Boolean, Date, Any };

std::string_view to_string(DataType type);        // "STRING", "INTEGER", ...
std::string_view to_lower_string(DataType type);  // "string", "integer", ...
std::optional<DataType> parse_datatype(std::string_view text);

// Partial order of the lattice: true iff `lower` ⊑ `upper`.
bool is_subtype(DataType lower, DataType upper);
DataType least_common_supertype(DataType a, DataType b);

DataType datatype_of(ValueKind kind);
// Integer values are accepted where FLOAT is declared.
bool value_conforms(const PropertyValue& value, DataType declared);

struct PropertyDef {
    std::string name;
    DataType type = DataType::Any;
    bool required = false;

    friend bool operator==(const PropertyDef&, const PropertyDef&) = default;
};

struct Cardinality {
    std::uint64_t min = 0;
    std::optional<std::uint64_t> max;  // nullopt is unbounded

    static Cardinality unbounded() { return {}; }
    static Cardinality exactly(std::uint64_t n) { return {n, n}; }

    bool admits(std::uint64_t count) const { return count >= min && (!max || count <= *max); }
    std::string to_string() const;  // "0..*", "1..3"

    friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

struct NodeType {
    std::string id;
    LabelSet labels;
    std::vector<PropertyDef> properties;
    std::optional<std::string> supertype;  // node type id

    std::string display_name() const { return pgschema::display_name(labels); }
    const PropertyDef* find_property(std::string_view name) const;

    friend bool operator==(const NodeType&, const NodeType&) = default;
};

struct EdgeType {
    std::string id;
    LabelSet labels;
    std::string src;  // node type id
    std::string dst;  // node type id
    std::vector<PropertyDef> properties;
    Cardinality out_card;  // edges per source node
    Cardinality in_card;   // edges per target node

    std::string label() const { return pgschema::display_name(labels); }
    const PropertyDef* find_property(std::string_view name) const;

    friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

// Public identity of an edge type: label plus endpoint display names.
struct EdgeKey {
    std::string label;
    std::string src;
    std::string dst;

    std::string to_string() const;  // "LABEL(Src->Dst)"

    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// The schema graph. Every instance satisfies referential integrity, unique
// display names, unique edge keys, valid identifiers and an acyclic supertype
// relation; the constructor enforces this and throws SchemaError(Integrity).
class SchemaGraph {
public:
    SchemaGraph() = default;
    SchemaGraph(std::vector<NodeType> node_types, std::vector<EdgeType> edge_types);

    const std::vector<NodeType>& node_types() const noexcept { return node_types_; }
    const std::vector<EdgeType>& edge_types() const noexcept { return edge_types_; }

    bool empty() const noexcept { return node_types_.empty() && edge_types_.empty(); }

    const NodeType* find_node_by_id(std::string_view id) const;
    const NodeType* find_node(std::string_view display_name) const;
    const NodeType* find_node(const LabelSet& labels) const;
    const EdgeType* find_edge_by_id(std::string_view id) const;
    const EdgeType* find_edge(const EdgeKey& key) const;

    EdgeKey key_of(const EdgeType& edge) const;
    std::string node_name(std::string_view id) const;

    // Ids not yet used in this schema, of the form "n<k>" / "e<k>".
    std::string fresh_node_id() const;
    std::string fresh_edge_id() const;

    // Structural equality including ids; use schema_equal for identity-free
    // comparison.
    friend bool operator==(const SchemaGraph&, const SchemaGraph&) = default;

private:
    std::vector<NodeType> node_types_;
    std::vector<EdgeType> edge_types_;
};

bool is_identifier(std::string_view text);

// Inverse of display_name; nullopt unless every label is an identifier.
std::optional<LabelSet> parse_display_name(std::string_view name);

// Node types sorted by display name, edge types by (label, src, dst) names,
// properties by name. Ids are kept.
SchemaGraph canonicalize(const SchemaGraph& schema);

// Equality of canonical forms, ignoring internal ids.
bool schema_equal(const SchemaGraph& a, const SchemaGraph& b);

}  // namespace pgschema
