#include "pgschema/extractor.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "pgschema/error.hpp"

namespace pgschema {

namespace {

struct PropertyStats {
    std::size_t present = 0;
    DataType type = DataType::Integer;  // overwritten by the first value
};

template <typename Element>
std::vector<PropertyDef> infer_properties(const std::vector<const Element*>& instances) {
    std::map<std::string, PropertyStats> stats;
    for (const auto* element : instances) {
        for (const auto& [key, value] : element->properties) {
            auto t = datatype_of(kind_of(value));
            auto [it, fresh] = stats.try_emplace(key, PropertyStats{0, t});
            it->second.present++;
            if (!fresh) it->second.type = least_common_supertype(it->second.type, t);
        }
    }
    std::vector<PropertyDef> out;
    for (const auto& [key, s] : stats) out.push_back({key, s.type, s.present == instances.size()});
    return out;
}

// Tightest (min, max) of per-instance counts; instances absent from `counts`
// contribute zero.
Cardinality observed(const std::vector<const GraphNode*>& instances,
                     const std::unordered_map<std::string, std::uint64_t>& counts) {
    std::uint64_t lo = UINT64_MAX;
    std::uint64_t hi = 0;
    for (const auto* node : instances) {
        auto it = counts.find(node->id);
        std::uint64_t n = it == counts.end() ? 0 : it->second;
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    return {lo, hi};
}

bool strict_subset(const LabelSet& a, const LabelSet& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::set<std::string> required_names(const NodeType& t) {
    std::set<std::string> out;
    for (const auto& p : t.properties) {
        if (p.required) out.insert(p.name);
    }
    return out;
}

}  // namespace

DataType infer_property_type(std::span<const PropertyValue> values) {
    if (values.empty()) {
        throw SchemaError(SchemaError::Code::Precondition, "cannot infer a datatype from no values");
    }
    DataType t = datatype_of(kind_of(values.front()));
    for (const auto& v : values.subspan(1)) t = least_common_supertype(t, datatype_of(kind_of(v)));
    return t;
}

SchemaGraph extract_schema(const PropertyGraph& graph, const ExtractionOptions& options) {
    std::map<LabelSet, std::vector<const GraphNode*>> by_labels;
    for (const auto& n : graph.nodes()) by_labels[n.labels].push_back(&n);

    std::vector<const LabelSet*> order;
    for (const auto& [labels, _] : by_labels) order.push_back(&labels);
    std::sort(order.begin(), order.end(), [](const LabelSet* a, const LabelSet* b) {
        return display_name(*a) < display_name(*b);
    });

    std::vector<NodeType> nodes;
    std::map<LabelSet, std::string> id_of;
    for (const auto* labels : order) {
        NodeType nt;
        nt.id = "n" + std::to_string(nodes.size() + 1);
        nt.labels = *labels;
        nt.properties = infer_properties(by_labels.at(*labels));
        id_of.emplace(*labels, nt.id);
        nodes.push_back(std::move(nt));
    }

    // Edge types keyed by (edge labels, source labels, target labels).
    using Key = std::tuple<LabelSet, LabelSet, LabelSet>;
    std::map<Key, std::vector<const GraphEdge*>> by_key;
    for (const auto& e : graph.edges()) {
        by_key[{e.labels, graph.find_node(e.src)->labels, graph.find_node(e.dst)->labels}].push_back(&e);
    }
    std::vector<const Key*> edge_order;
    for (const auto& [key, _] : by_key) edge_order.push_back(&key);
    auto sort_key = [](const Key* k) {
        return EdgeKey{display_name(std::get<0>(*k)), display_name(std::get<1>(*k)),
                       display_name(std::get<2>(*k))};
    };
    std::sort(edge_order.begin(), edge_order.end(),
              [&](const Key* a, const Key* b) { return sort_key(a) < sort_key(b); });

    std::vector<EdgeType> edges;
    for (const auto* key : edge_order) {
        const auto& instances = by_key.at(*key);
        EdgeType et;
        et.id = "e" + std::to_string(edges.size() + 1);
        et.labels = std::get<0>(*key);
        et.src = id_of.at(std::get<1>(*key));
        et.dst = id_of.at(std::get<2>(*key));
        et.properties = infer_properties(instances);
        if (options.infer_cardinality) {
            std::unordered_map<std::string, std::uint64_t> out_counts;
            std::unordered_map<std::string, std::uint64_t> in_counts;
            for (const auto* e : instances) {
                ++out_counts[e->src];
                ++in_counts[e->dst];
            }
            et.out_card = observed(by_labels.at(std::get<1>(*key)), out_counts);
            et.in_card = observed(by_labels.at(std::get<2>(*key)), in_counts);
        }
        edges.push_back(std::move(et));
    }

    SchemaGraph schema(std::move(nodes), std::move(edges));
    return options.infer_subtypes ? infer_subtypes(schema) : schema;
}

SchemaGraph infer_subtypes(const SchemaGraph& schema) {
    auto nodes = schema.node_types();
    auto reaches = [&](const std::string& from, const std::string& target) {
        std::optional<std::string> cur = from;
        for (std::size_t steps = 0; cur && steps <= nodes.size(); ++steps) {
            if (*cur == target) return true;
            auto it = std::find_if(nodes.begin(), nodes.end(),
                                   [&](const NodeType& n) { return n.id == *cur; });
            cur = it->supertype;
        }
        return false;
    };
    for (auto& sub : nodes) {
        if (sub.supertype) continue;
        auto sub_required = required_names(sub);
        const NodeType* best = nullptr;
        for (const auto& super : nodes) {
            // The unlabeled type is a subset of everything and never a supertype.
            if (super.labels.empty() || !strict_subset(super.labels, sub.labels)) continue;
            auto super_required = required_names(super);
            if (!std::includes(sub_required.begin(), sub_required.end(), super_required.begin(),
                               super_required.end()))
                continue;
            if (reaches(super.id, sub.id)) continue;
            if (!best || super.labels.size() > best->labels.size() ||
                (super.labels.size() == best->labels.size() &&
                 super.display_name() < best->display_name()))
                best = &super;
        }
        if (best) sub.supertype = best->id;
    }
    return SchemaGraph(std::move(nodes), schema.edge_types());
}

}  // namespace pgschema
