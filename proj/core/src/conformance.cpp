#include "pgschema/conformance.hpp"

#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace pgschema {

namespace {

std::string describe_value_kind(const PropertyValue& v) {
    return std::string(to_lower_string(datatype_of(kind_of(v))));
}

void check_properties(const std::string& element_id, const std::string& type_name,
                      const PropertyMap& values, const std::vector<PropertyDef>& decls,
                      const ConformanceOptions& options, std::vector<Violation>& out) {
    for (const auto& decl : decls) {
        auto it = values.find(decl.name);
        if (it == values.end()) {
            if (decl.required) {
                out.push_back({element_id, ViolationKind::MissingRequiredProperty,
                               "missing required property " + type_name + "." + decl.name});
            }
            continue;
        }
        if (!value_conforms(it->second, decl.type)) {
            out.push_back({element_id, ViolationKind::WrongDatatype,
                           "property " + type_name + "." + decl.name + " holds a " +
                               describe_value_kind(it->second) + ", declared " +
                               std::string(to_string(decl.type))});
        }
    }
    if (options.open_world) return;
    for (const auto& [key, value] : values) {
        bool declared = false;
        for (const auto& d : decls) declared = declared || d.name == key;
        if (!declared) {
            out.push_back({element_id, ViolationKind::UnknownProperty,
                           "undeclared property " + type_name + "." + key});
        }
    }
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::UnknownType: return "unknown-type";
    case ViolationKind::MissingRequiredProperty: return "missing-required-property";
    case ViolationKind::WrongDatatype: return "wrong-datatype";
    case ViolationKind::UnknownProperty: return "unknown-property";
    case ViolationKind::EndpointMismatch: return "endpoint-mismatch";
    case ViolationKind::CardinalityViolation: return "cardinality-violation";
    }
    return "unknown";
}

ConformanceReport validate_conformance(const PropertyGraph& graph, const SchemaGraph& schema,
                                       const ConformanceOptions& options) {
    ConformanceReport report;
    auto& out = report.violations;

    std::map<LabelSet, const NodeType*> node_type_of_labels;
    for (const auto& nt : schema.node_types()) node_type_of_labels.emplace(nt.labels, &nt);

    using EdgeIdentity = std::tuple<LabelSet, std::string, std::string>;
    std::map<EdgeIdentity, const EdgeType*> edge_types;
    std::set<LabelSet> edge_labels;
    for (const auto& et : schema.edge_types()) {
        edge_types.emplace(EdgeIdentity{et.labels, et.src, et.dst}, &et);
        edge_labels.insert(et.labels);
    }

    // Typing of nodes by exact label set.
    std::unordered_map<std::string, const NodeType*> typed;
    for (const auto& node : graph.nodes()) {
        auto it = node_type_of_labels.find(node.labels);
        if (it == node_type_of_labels.end()) {
            out.push_back({node.id, ViolationKind::UnknownType,
                           "no node type for labels " + display_name(node.labels)});
            continue;
        }
        typed.emplace(node.id, it->second);
        check_properties(node.id, it->second->display_name(), node.properties,
                         it->second->properties, options, out);
    }

    // Per edge type, edge counts per source and per target node id.
    std::map<const EdgeType*, std::unordered_map<std::string, std::uint64_t>> out_counts;
    std::map<const EdgeType*, std::unordered_map<std::string, std::uint64_t>> in_counts;

    for (const auto& edge : graph.edges()) {
        auto src = typed.find(edge.src);
        auto dst = typed.find(edge.dst);
        if (src == typed.end() || dst == typed.end() ||
            !edge_types.count({edge.labels, src->second->id, dst->second->id})) {
            if (!edge_labels.count(edge.labels)) {
                out.push_back({edge.id, ViolationKind::UnknownType,
                               "no edge type for label " + display_name(edge.labels)});
            } else {
                auto name = [&](auto it) {
                    return it == typed.end() ? std::string("<untyped>") : it->second->display_name();
                };
                out.push_back({edge.id, ViolationKind::EndpointMismatch,
                               "no edge type " + display_name(edge.labels) + " from " + name(src) +
                                   " to " + name(dst)});
            }
            continue;
        }
        const EdgeType* et = edge_types.at({edge.labels, src->second->id, dst->second->id});
        check_properties(edge.id, schema.key_of(*et).to_string(), edge.properties, et->properties,
                         options, out);
        ++out_counts[et][edge.src];
        ++in_counts[et][edge.dst];
    }

    // Every instance of an endpoint type is counted, including those with no
    // edge at all.
    for (const auto& et : schema.edge_types()) {
        for (const auto& node : graph.nodes()) {
            auto t = typed.find(node.id);
            if (t == typed.end()) continue;
            auto count_for = [&](auto& table) -> std::uint64_t {
                auto per_type = table.find(&et);
                if (per_type == table.end()) return 0;
                auto c = per_type->second.find(node.id);
                return c == per_type->second.end() ? 0 : c->second;
            };
            auto key = schema.key_of(et).to_string();
            if (t->second->id == et.src) {
                auto n = count_for(out_counts);
                if (!et.out_card.admits(n)) {
                    out.push_back({node.id, ViolationKind::CardinalityViolation,
                                   "node has " + std::to_string(n) + " outgoing " + key +
                                       " edges, allowed " + et.out_card.to_string()});
                }
            }
            if (t->second->id == et.dst) {
                auto n = count_for(in_counts);
                if (!et.in_card.admits(n)) {
                    out.push_back({node.id, ViolationKind::CardinalityViolation,
                                   "node has " + std::to_string(n) + " incoming " + key +
                                       " edges, allowed " + et.in_card.to_string()});
                }
            }
        }
    }
    return report;
}

}  // namespace pgschema
