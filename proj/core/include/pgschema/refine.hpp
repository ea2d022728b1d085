#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pgschema/schema.hpp"

namespace pgschema {

// Node types are addressed by display name.
struct NodeRef {
    std::string name;

    friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

// Edge types are addressed by session id when given, otherwise by key.
struct EdgeRef {
    std::optional<std::string> id;
    EdgeKey key;

    static EdgeRef by_id(std::string id) { return {std::move(id), {}}; }
    static EdgeRef by_key(EdgeKey key) { return {std::nullopt, std::move(key)}; }

    friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
};

using TypeRef = std::variant<NodeRef, EdgeRef>;

std::string describe(const TypeRef& ref);

namespace edit {

struct AddNodeType { LabelSet labels; };
struct RemoveNodeType { std::string name; };
struct AddEdgeType { LabelSet labels; std::string src; std::string dst; };
struct RemoveEdgeType { EdgeRef edge; };
struct AddProperty { TypeRef owner; PropertyDef property; };
struct RemoveProperty { TypeRef owner; std::string key; };
struct SetPropertyType { TypeRef owner; std::string key; DataType type; };
struct SetPropertyRequired { TypeRef owner; std::string key; bool required; };
struct FlipEdgeDirection { EdgeRef edge; };
struct SetCardinality { EdgeRef edge; Cardinality out_card; Cardinality in_card; };
struct SetSupertype { std::string name; std::optional<std::string> supertype; };
struct RenameType { std::string name; LabelSet labels; };

struct MergeUnion { std::string a; std::string b; LabelSet labels; };
struct MergeIntersection { std::vector<std::string> types; LabelSet labels; };
struct SplitNodeType {
    std::string type;
    std::string discriminator;
    LabelSet with_labels;
    LabelSet without_labels;
};
struct DuplicateType { TypeRef type; LabelSet labels; };
struct EscalateProperty {
    std::string type;
    std::string key;
    LabelSet node_labels;
    LabelSet edge_labels;
};

}  // namespace edit

using BasicEdit = std::variant<edit::AddNodeType, edit::RemoveNodeType, edit::AddEdgeType,
                               edit::RemoveEdgeType, edit::AddProperty, edit::RemoveProperty,
                               edit::SetPropertyType, edit::SetPropertyRequired,
                               edit::FlipEdgeDirection, edit::SetCardinality, edit::SetSupertype,
                               edit::RenameType>;

// Any refinement command: a basic edit or one of the composite operations.
using Edit = std::variant<BasicEdit, edit::MergeUnion, edit::MergeIntersection,
                          edit::SplitNodeType, edit::DuplicateType, edit::EscalateProperty>;

// All operations are pure and throw SchemaError on unknown elements, name
// collisions, or violated preconditions. Removing a node type also removes
// every incident edge type and clears supertype links to it.
SchemaGraph apply_basic_edit(const SchemaGraph& schema, const BasicEdit& edit);

// Replaces `a` and `b` by one type holding the union of their properties. A
// shared key gets the least common supertype and stays required only if
// required on both sides; one-sided keys become optional. Incident edge types
// are re-pointed and colliding ones merged by the same rule, with cardinalities
// widened.
SchemaGraph merge_union(const SchemaGraph& schema, const std::string& a, const std::string& b,
                        const LabelSet& labels);

// Adds a new type holding the keys common to all inputs and makes it the
// supertype of every input that has none.
SchemaGraph merge_intersection(const SchemaGraph& schema, const std::vector<std::string>& types,
                               const LabelSet& labels);

// Replaces `type` by a half where `discriminator` is required and a half
// without it. Incident edge types are duplicated onto both halves.
SchemaGraph split_node_type(const SchemaGraph& schema, const std::string& type,
                            const std::string& discriminator, const LabelSet& with_labels,
                            const LabelSet& without_labels);

// Node duplicates copy no incident edges; edge duplicates keep endpoints and
// take `labels` as the new label.
SchemaGraph duplicate_type(const SchemaGraph& schema, const TypeRef& type, const LabelSet& labels);

// Moves property `key` of `type` into a new node type with a single required
// `value` property, reached through a new edge type whose out-cardinality is
// 1..1 for a required property and 0..1 otherwise.
SchemaGraph escalate_property(const SchemaGraph& schema, const std::string& type,
                              const std::string& key, const LabelSet& node_labels,
                              const LabelSet& edge_labels);

SchemaGraph apply_edit(const SchemaGraph& schema, const Edit& edit);

}  // namespace pgschema
