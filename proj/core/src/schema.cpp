#include "pgschema/schema.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "pgschema/error.hpp"

namespace pgschema {

namespace {

[[noreturn]] void integrity(const std::string& message) {
    throw SchemaError(SchemaError::Code::Integrity, message);
}

void check_properties(const std::vector<PropertyDef>& props, const std::string& owner) {
    std::unordered_set<std::string> seen;
    for (const auto& p : props) {
        if (!is_identifier(p.name))
            integrity("property name '" + p.name + "' of " + owner + " is not an identifier");
        if (!seen.insert(p.name).second)
            integrity("duplicate property '" + p.name + "' in " + owner);
    }
}

void check_labels(const LabelSet& labels, const std::string& what) {
    for (const auto& l : labels) {
        if (!is_identifier(l) || l == kUnlabeled)
            integrity("label '" + l + "' of " + what + " is not a valid identifier");
    }
}

std::string fresh_id(char prefix, const std::vector<std::string>& used) {
    std::uint64_t next = 1;
    for (const auto& id : used) {
        if (id.size() < 2 || id[0] != prefix) continue;
        std::uint64_t n = 0;
        auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
        if (ec == std::errc{} && ptr == id.data() + id.size()) next = std::max(next, n + 1);
    }
    return std::string(1, prefix) + std::to_string(next);
}

std::vector<PropertyDef> sorted_props(std::vector<PropertyDef> props) {
    std::sort(props.begin(), props.end(),
              [](const PropertyDef& a, const PropertyDef& b) { return a.name < b.name; });
    return props;
}

}  // namespace

std::string_view to_string(DataType type) {
    switch (type) {
    case DataType::String: return "STRING";
    case DataType::Integer: return "INTEGER";
    case DataType::Float: return "FLOAT";
    case DataType::Boolean: return "BOOLEAN";
    case DataType::Date: return "DATE";
    case DataType::Any: return "ANY";
    }
    return "ANY";
}

std::string_view to_lower_string(DataType type) {
    switch (type) {
    case DataType::String: return "string";
    case DataType::Integer: return "integer";
    case DataType::Float: return "float";
    case DataType::Boolean: return "boolean";
    case DataType::Date: return "date";
    case DataType::Any: return "any";
    }
    return "any";
}

std::optional<DataType> parse_datatype(std::string_view text) {
    for (auto t : {DataType::String, DataType::Integer, DataType::Float, DataType::Boolean,
                   DataType::Date, DataType::Any}) {
        if (text == to_string(t) || text == to_lower_string(t)) return t;
    }
    return std::nullopt;
}

bool is_subtype(DataType lower, DataType upper) {
    return lower == upper || upper == DataType::Any ||
           (lower == DataType::Integer && upper == DataType::Float);
}

DataType least_common_supertype(DataType a, DataType b) {
    if (is_subtype(a, b)) return b;
    if (is_subtype(b, a)) return a;
    return DataType::Any;
}

DataType datatype_of(ValueKind kind) {
    switch (kind) {
    case ValueKind::String: return DataType::String;
    case ValueKind::Integer: return DataType::Integer;
    case ValueKind::Float: return DataType::Float;
    case ValueKind::Boolean: return DataType::Boolean;
    case ValueKind::Date: return DataType::Date;
    }
    return DataType::Any;
}

bool value_conforms(const PropertyValue& value, DataType declared) {
    return is_subtype(datatype_of(kind_of(value)), declared);
}

std::string Cardinality::to_string() const {
    return std::to_string(min) + ".." + (max ? std::to_string(*max) : std::string("*"));
}

const PropertyDef* NodeType::find_property(std::string_view name) const {
    for (const auto& p : properties) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

const PropertyDef* EdgeType::find_property(std::string_view name) const {
    for (const auto& p : properties) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::string EdgeKey::to_string() const { return label + "(" + src + "->" + dst + ")"; }

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
    if (!alpha(text[0])) return false;
    return std::all_of(text.begin() + 1, text.end(),
                       [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

std::optional<LabelSet> parse_display_name(std::string_view name) {
    if (name == kUnlabeled) return LabelSet{};
    LabelSet out;
    while (true) {
        auto amp = name.find('&');
        auto part = name.substr(0, amp);
        if (!is_identifier(part) || part == kUnlabeled) return std::nullopt;
        out.emplace(part);
        if (amp == std::string_view::npos) break;
        name.remove_prefix(amp + 1);
    }
    return out;
}

SchemaGraph::SchemaGraph(std::vector<NodeType> node_types, std::vector<EdgeType> edge_types)
    : node_types_(std::move(node_types)), edge_types_(std::move(edge_types)) {
    std::unordered_map<std::string, const NodeType*> by_id;
    std::unordered_set<std::string> names;
    for (const auto& n : node_types_) {
        if (n.id.empty()) integrity("node type with empty id");
        if (!by_id.emplace(n.id, &n).second) integrity("duplicate element id '" + n.id + "'");
        check_labels(n.labels, "node type " + n.display_name());
        if (!names.insert(n.display_name()).second)
            integrity("duplicate node type '" + n.display_name() + "'");
        check_properties(n.properties, n.display_name());
    }
    for (const auto& n : node_types_) {
        if (!n.supertype) continue;
        if (!by_id.count(*n.supertype))
            integrity("supertype of '" + n.display_name() + "' does not exist");
        // Walk the chain; more steps than types means a cycle.
        const NodeType* cur = &n;
        for (std::size_t steps = 0; cur->supertype; ++steps) {
            if (steps > node_types_.size())
                integrity("supertype cycle through '" + n.display_name() + "'");
            cur = by_id.at(*cur->supertype);
        }
    }
    std::unordered_set<std::string> edge_ids;
    std::set<EdgeKey> keys;
    for (const auto& e : edge_types_) {
        if (e.id.empty()) integrity("edge type with empty id");
        if (by_id.count(e.id) || !edge_ids.insert(e.id).second)
            integrity("duplicate element id '" + e.id + "'");
        check_labels(e.labels, "edge type " + e.label());
        if (!by_id.count(e.src) || !by_id.count(e.dst))
            integrity("edge type '" + e.label() + "' references a missing node type");
        auto key = key_of(e);
        if (!keys.insert(key).second) integrity("duplicate edge type '" + key.to_string() + "'");
        check_properties(e.properties, key.to_string());
        for (const auto* c : {&e.out_card, &e.in_card}) {
            if (c->max && (*c->max == 0 || c->min > *c->max))
                integrity("invalid cardinality " + c->to_string() + " on " + key.to_string());
        }
    }
}

const NodeType* SchemaGraph::find_node_by_id(std::string_view id) const {
    for (const auto& n : node_types_) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

const NodeType* SchemaGraph::find_node(std::string_view name) const {
    for (const auto& n : node_types_) {
        if (n.display_name() == name) return &n;
    }
    return nullptr;
}

const NodeType* SchemaGraph::find_node(const LabelSet& labels) const {
    for (const auto& n : node_types_) {
        if (n.labels == labels) return &n;
    }
    return nullptr;
}

const EdgeType* SchemaGraph::find_edge_by_id(std::string_view id) const {
    for (const auto& e : edge_types_) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

const EdgeType* SchemaGraph::find_edge(const EdgeKey& key) const {
    for (const auto& e : edge_types_) {
        if (e.label() == key.label && node_name(e.src) == key.src && node_name(e.dst) == key.dst)
            return &e;
    }
    return nullptr;
}

EdgeKey SchemaGraph::key_of(const EdgeType& edge) const {
    return {edge.label(), node_name(edge.src), node_name(edge.dst)};
}

std::string SchemaGraph::node_name(std::string_view id) const {
    const auto* n = find_node_by_id(id);
    return n ? n->display_name() : std::string();
}

std::string SchemaGraph::fresh_node_id() const {
    std::vector<std::string> used;
    for (const auto& n : node_types_) used.push_back(n.id);
    for (const auto& e : edge_types_) used.push_back(e.id);
    return fresh_id('n', used);
}

std::string SchemaGraph::fresh_edge_id() const {
    std::vector<std::string> used;
    for (const auto& n : node_types_) used.push_back(n.id);
    for (const auto& e : edge_types_) used.push_back(e.id);
    return fresh_id('e', used);
}

SchemaGraph canonicalize(const SchemaGraph& schema) {
    auto nodes = schema.node_types();
    for (auto& n : nodes) n.properties = sorted_props(std::move(n.properties));
    std::sort(nodes.begin(), nodes.end(), [](const NodeType& a, const NodeType& b) {
        return a.display_name() < b.display_name();
    });
    auto edges = schema.edge_types();
    for (auto& e : edges) e.properties = sorted_props(std::move(e.properties));
    std::sort(edges.begin(), edges.end(), [&](const EdgeType& a, const EdgeType& b) {
        return schema.key_of(a) < schema.key_of(b);
    });
    return SchemaGraph(std::move(nodes), std::move(edges));
}

bool schema_equal(const SchemaGraph& a, const SchemaGraph& b) {
    if (a.node_types().size() != b.node_types().size() ||
        a.edge_types().size() != b.edge_types().size())
        return false;
    auto ca = canonicalize(a);
    auto cb = canonicalize(b);
    for (std::size_t i = 0; i < ca.node_types().size(); ++i) {
        const auto& x = ca.node_types()[i];
        const auto& y = cb.node_types()[i];
        auto sx = x.supertype ? ca.node_name(*x.supertype) : std::string();
        auto sy = y.supertype ? cb.node_name(*y.supertype) : std::string();
        if (x.labels != y.labels || x.properties != y.properties || x.supertype.has_value() != y.supertype.has_value() || sx != sy)
            return false;
    }
    for (std::size_t i = 0; i < ca.edge_types().size(); ++i) {
        const auto& x = ca.edge_types()[i];
        const auto& y = cb.edge_types()[i];
        if (ca.key_of(x) != cb.key_of(y) || x.properties != y.properties ||
            x.out_card != y.out_card || x.in_card != y.in_card)
            return false;
    }
    return true;
}

}  // namespace pgschema
