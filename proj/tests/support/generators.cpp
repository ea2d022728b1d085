#include "generators.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include "pgschema/error.hpp"

namespace pgschema::testing {

namespace {

const std::vector<std::string> kLabels = {"Person", "Company", "City", "Tag", "Post"};
const std::vector<std::string> kEdgeLabels = {"KNOWS", "WORKS_AT", "LIVES_IN"};
const std::vector<std::string> kKeys = {"name", "age", "score", "active", "born", "title", "rank", "code"};
const std::vector<DataType> kTypes = {DataType::String, DataType::Integer, DataType::Float,
                                      DataType::Boolean, DataType::Date, DataType::Any};

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::size_t upto(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n)(rng); }

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

LabelSet random_labels(Rng& rng, const std::vector<std::string>& pool, bool allow_empty) {
    LabelSet out;
    std::size_t n = allow_empty ? upto(rng, 2) : 1 + upto(rng, 1);
    while (out.size() < n) out.insert(pick(rng, pool));
    return out;
}

PropertyValue random_value(Rng& rng) {
    switch (upto(rng, 4)) {
    case 0: return std::string(1, static_cast<char>('a' + upto(rng, 25)));
    case 1: return static_cast<std::int64_t>(upto(rng, 1000)) - 500;
    case 2: return static_cast<double>(upto(rng, 1000)) + 0.25;
    case 3: return coin(rng);
    default: return Date{2000 + static_cast<int>(upto(rng, 30)), 1 + static_cast<int>(upto(rng, 11)),
                         1 + static_cast<int>(upto(rng, 27))};
    }
}

PropertyMap random_properties(Rng& rng, std::size_t max_keys) {
    PropertyMap out;
    std::size_t keys = std::min(max_keys, kKeys.size());
    for (std::size_t i = 0; i < keys; ++i) {
        if (coin(rng, 0.4)) out.emplace(kKeys[i], random_value(rng));
    }
    return out;
}

std::vector<PropertyDef> random_defs(Rng& rng, std::size_t max) {
    std::vector<PropertyDef> out;
    std::set<std::string> used;
    std::size_t n = upto(rng, max);
    while (out.size() < n) {
        const auto& key = pick(rng, kKeys);
        if (!used.insert(key).second) continue;
        out.push_back({key, pick(rng, kTypes), coin(rng)});
    }
    return out;
}

Cardinality random_card(Rng& rng) {
    Cardinality c;
    c.min = upto(rng, 2);
    if (coin(rng)) c.max = std::max<std::uint64_t>(1, c.min + upto(rng, 3));
    return c;
}

std::string fresh_name(const SchemaGraph& s, const std::string& stem) {
    for (int i = 1;; ++i) {
        auto name = stem + std::to_string(i);
        if (!s.find_node(name)) return name;
    }
}

std::string fresh_key(const std::vector<PropertyDef>& props, int salt) {
    for (int i = salt;; ++i) {
        auto key = "extra" + std::to_string(i);
        if (std::none_of(props.begin(), props.end(), [&](const PropertyDef& p) { return p.name == key; }))
            return key;
    }
}

// A property slot of the base schema: (owner, key).
struct Slot {
    TypeRef owner;
    PropertyDef def;
    std::string id;  // owner element id, to detect "touched"
};

std::vector<Slot> slots(const SchemaGraph& s) {
    std::vector<Slot> out;
    for (const auto& n : s.node_types())
        for (const auto& p : n.properties) out.push_back({NodeRef{n.display_name()}, p, n.id});
    for (const auto& e : s.edge_types())
        for (const auto& p : e.properties) out.push_back({EdgeRef::by_key(s.key_of(e)), p, e.id});
    return out;
}

// One additive edit on `current`; never touches the element with id `avoid_id`
// (and, for properties, the key `avoid_key` on it).
std::optional<BasicEdit> additive_edit(const SchemaGraph& current, Rng& rng, int salt,
                                       const std::string& avoid_id, const std::string& avoid_key) {
    switch (upto(rng, 4)) {
    case 0:
        return edit::AddNodeType{{fresh_name(current, "Fresh")}};
    case 1: {
        if (current.node_types().empty()) return std::nullopt;
        const auto& a = pick(rng, current.node_types());
        const auto& b = pick(rng, current.node_types());
        return edit::AddEdgeType{{"NEW_" + std::to_string(salt)}, a.display_name(), b.display_name()};
    }
    case 2: {
        if (current.node_types().empty()) return std::nullopt;
        const auto& n = pick(rng, current.node_types());
        return edit::AddProperty{NodeRef{n.display_name()}, {fresh_key(n.properties, salt), pick(rng, kTypes), false}};
    }
    case 3: {
        auto all = slots(current);
        std::erase_if(all, [&](const Slot& s) { return s.id == avoid_id && (avoid_key.empty() || s.def.name == avoid_key); });
        if (all.empty()) return std::nullopt;
        const auto& s = pick(rng, all);
        std::vector<DataType> wider;
        for (auto t : kTypes) {
            if (t != s.def.type && is_subtype(s.def.type, t)) wider.push_back(t);
        }
        if (wider.empty()) return std::nullopt;
        return edit::SetPropertyType{s.owner, s.def.name, pick(rng, wider)};
    }
    default: {
        auto all = slots(current);
        std::erase_if(all, [&](const Slot& s) { return s.id == avoid_id && (avoid_key.empty() || s.def.name == avoid_key); });
        if (all.empty()) return std::nullopt;
        const auto& s = pick(rng, all);
        return edit::SetPropertyRequired{s.owner, s.def.name, false};
    }
    }
}

void extend_additive(EditSequence& seq, SchemaGraph& current, Rng& rng, std::size_t count,
                     const std::string& avoid_id, const std::string& avoid_key) {
    for (std::size_t attempts = 0; count > 0 && attempts < count * 10; ++attempts) {
        auto e = additive_edit(current, rng, static_cast<int>(seq.edits.size()), avoid_id, avoid_key);
        if (!e) continue;
        try {
            current = apply_basic_edit(current, *e);
        } catch (const SchemaError&) {
            continue;
        }
        seq.edits.push_back(std::move(*e));
        --count;
    }
}

}  // namespace

PropertyGraph random_graph(Rng& rng, const GraphParams& params) {
    std::vector<LabelSet> label_sets;
    std::size_t wanted = 1 + upto(rng, params.max_label_sets - 1);
    for (std::size_t attempts = 0; label_sets.size() < wanted && attempts < 50; ++attempts) {
        auto ls = random_labels(rng, kLabels, true);
        if (std::find(label_sets.begin(), label_sets.end(), ls) == label_sets.end()) label_sets.push_back(ls);
    }
    std::vector<GraphNode> nodes;
    std::size_t n = upto(rng, params.max_nodes);
    for (std::size_t i = 0; i < n; ++i) {
        nodes.push_back({"n" + std::to_string(i), pick(rng, label_sets), random_properties(rng, params.max_keys)});
    }
    std::vector<GraphEdge> edges;
    if (!nodes.empty()) {
        std::size_t m = upto(rng, std::min(params.max_edges, 2 * n));
        for (std::size_t i = 0; i < m; ++i) {
            edges.push_back({"e" + std::to_string(i), pick(rng, nodes).id, pick(rng, nodes).id,
                             random_labels(rng, kEdgeLabels, false), random_properties(rng, 3)});
        }
    }
    return PropertyGraph(std::move(nodes), std::move(edges));
}

std::string shuffled_lines(const PropertyGraph& graph, Rng& rng) {
    auto text = dump_graph(graph);
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

SchemaGraph random_schema(Rng& rng, const SchemaParams& params) {
    std::vector<NodeType> nodes;
    std::set<LabelSet> used;
    std::size_t n = upto(rng, params.max_node_types);
    for (std::size_t attempts = 0; nodes.size() < n && attempts < 50; ++attempts) {
        auto labels = random_labels(rng, kLabels, true);
        if (!used.insert(labels).second) continue;
        NodeType nt;
        nt.id = "n" + std::to_string(nodes.size() + 1);
        nt.labels = labels;
        nt.properties = random_defs(rng, params.max_properties);
        // Supertypes only point backwards, so the relation is acyclic.
        if (!nodes.empty() && coin(rng, 0.3)) nt.supertype = pick(rng, nodes).id;
        nodes.push_back(std::move(nt));
    }
    std::vector<EdgeType> edges;
    std::set<std::tuple<LabelSet, std::string, std::string>> keys;
    if (!nodes.empty()) {
        std::size_t m = upto(rng, params.max_edge_types);
        for (std::size_t attempts = 0; edges.size() < m && attempts < 50; ++attempts) {
            EdgeType et;
            et.labels = random_labels(rng, kEdgeLabels, false);
            et.src = pick(rng, nodes).id;
            et.dst = pick(rng, nodes).id;
            if (!keys.emplace(et.labels, et.src, et.dst).second) continue;
            et.id = "e" + std::to_string(edges.size() + 1);
            et.properties = random_defs(rng, 3);
            et.out_card = random_card(rng);
            et.in_card = random_card(rng);
            edges.push_back(std::move(et));
        }
    }
    // Shuffle declaration order; identity must not depend on it.
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::shuffle(edges.begin(), edges.end(), rng);
    return SchemaGraph(std::move(nodes), std::move(edges));
}

SchemaGraph mutate(const SchemaGraph& schema, Rng& rng, std::size_t steps) {
    SchemaGraph current = schema;
    for (std::size_t i = 0; i < steps; ++i) {
        std::optional<BasicEdit> e;
        auto nodes = current.node_types();
        auto edges = current.edge_types();
        switch (upto(rng, 9)) {
        case 0: e = edit::AddNodeType{random_labels(rng, kLabels, true)}; break;
        case 1: if (!nodes.empty()) e = edit::RemoveNodeType{pick(rng, nodes).display_name()}; break;
        case 2:
            if (!nodes.empty())
                e = edit::AddEdgeType{random_labels(rng, kEdgeLabels, false), pick(rng, nodes).display_name(),
                                      pick(rng, nodes).display_name()};
            break;
        case 3: if (!edges.empty()) e = edit::RemoveEdgeType{EdgeRef::by_id(pick(rng, edges).id)}; break;
        case 4:
            if (!nodes.empty())
                e = edit::AddProperty{NodeRef{pick(rng, nodes).display_name()}, {pick(rng, kKeys), pick(rng, kTypes), coin(rng)}};
            break;
        case 5: {
            auto all = slots(current);
            if (!all.empty()) {
                const auto& s = pick(rng, all);
                e = coin(rng) ? BasicEdit{edit::RemoveProperty{s.owner, s.def.name}}
                              : BasicEdit{edit::SetPropertyType{s.owner, s.def.name, pick(rng, kTypes)}};
            }
            break;
        }
        case 6: {
            auto all = slots(current);
            if (!all.empty()) {
                const auto& s = pick(rng, all);
                e = edit::SetPropertyRequired{s.owner, s.def.name, !s.def.required};
            }
            break;
        }
        case 7:
            if (!edges.empty()) {
                e = coin(rng) ? BasicEdit{edit::FlipEdgeDirection{EdgeRef::by_id(pick(rng, edges).id)}}
                              : BasicEdit{edit::SetCardinality{EdgeRef::by_id(pick(rng, edges).id), random_card(rng), random_card(rng)}};
            }
            break;
        case 8:
            if (nodes.size() >= 2) {
                std::optional<std::string> super;
                if (coin(rng, 0.7)) super = pick(rng, nodes).display_name();
                e = edit::SetSupertype{pick(rng, nodes).display_name(), super};
            }
            break;
        default:
            if (!nodes.empty()) e = edit::RenameType{pick(rng, nodes).display_name(), random_labels(rng, kLabels, false)};
            break;
        }
        if (!e) continue;
        try {
            current = apply_basic_edit(current, *e);
        } catch (const SchemaError&) {
        }
    }
    return current;
}

EditSequence additive_sequence(const SchemaGraph& base, Rng& rng, std::size_t length) {
    EditSequence seq;
    SchemaGraph current = base;
    extend_additive(seq, current, rng, length, "", "");
    return seq;
}

EditSequence breaking_sequence(const SchemaGraph& base, Rng& rng, std::size_t length) {
    // Candidate breaking edits on base elements.
    struct Candidate {
        BasicEdit edit;
        std::string id;
        std::string key;
    };
    std::vector<Candidate> candidates;
    for (const auto& n : base.node_types()) candidates.push_back({edit::RemoveNodeType{n.display_name()}, n.id, ""});
    for (const auto& e : base.edge_types())
        candidates.push_back({edit::RemoveEdgeType{EdgeRef::by_key(base.key_of(e))}, e.id, ""});
    for (const auto& s : slots(base)) {
        candidates.push_back({edit::RemoveProperty{s.owner, s.def.name}, s.id, s.def.name});
        for (auto t : kTypes) {
            if (!is_subtype(s.def.type, t))
                candidates.push_back({edit::SetPropertyType{s.owner, s.def.name, t}, s.id, s.def.name});
        }
        if (!s.def.required)
            candidates.push_back({edit::SetPropertyRequired{s.owner, s.def.name, true}, s.id, s.def.name});
    }
    EditSequence seq;
    seq.breaking = true;
    if (candidates.empty()) throw std::invalid_argument("breaking_sequence needs a non-empty base schema");
    const auto& chosen = pick(rng, candidates);
    SchemaGraph current = base;
    std::size_t before = upto(rng, length);
    // Removing a node type also retires everything attached to it.
    bool removes_node = std::holds_alternative<edit::RemoveNodeType>(chosen.edit);
    extend_additive(seq, current, rng, before, chosen.id, removes_node ? "" : chosen.key);
    current = apply_basic_edit(current, chosen.edit);
    seq.edits.push_back(chosen.edit);
    extend_additive(seq, current, rng, length - before, chosen.id, removes_node ? "" : chosen.key);
    return seq;
}

SchemaGraph apply_all(const SchemaGraph& base, const std::vector<BasicEdit>& edits) {
    SchemaGraph current = base;
    for (const auto& e : edits) current = apply_basic_edit(current, e);
    return current;
}

}  // namespace pgschema::testing
