#include "pgschema/refine.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "pgschema/error.hpp"

namespace pgschema {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(SchemaError::Code code, const std::string& message) {
    throw SchemaError(code, message);
}

std::vector<PropertyDef> union_properties(const std::vector<PropertyDef>& a,
                                          const std::vector<PropertyDef>& b) {
    std::map<std::string, PropertyDef> merged;
    for (const auto& p : a) merged[p.name] = {p.name, p.type, false};
    for (const auto& q : b) {
        auto it = merged.find(q.name);
        if (it == merged.end()) {
            merged[q.name] = {q.name, q.type, false};
        } else {
            const auto* p = &*std::find_if(a.begin(), a.end(), [&](const PropertyDef& x) { return x.name == q.name; });
            it->second = {q.name, least_common_supertype(p->type, q.type), p->required && q.required};
        }
    }
    std::vector<PropertyDef> out;
    for (auto& [_, p] : merged) out.push_back(std::move(p));
    return out;
}

Cardinality widen(const Cardinality& a, const Cardinality& b) {
    Cardinality out;
    out.min = std::min(a.min, b.min);
    if (a.max && b.max) out.max = std::max(*a.max, *b.max);
    return out;
}

// Mutable working copy of a schema. Every public operation builds a fresh
// SchemaGraph from it, so the integrity check runs on every result.
class Draft {
public:
    explicit Draft(const SchemaGraph& s) : nodes(s.node_types()), edges(s.edge_types()) {}

    std::vector<NodeType> nodes;
    std::vector<EdgeType> edges;

    NodeType* find_node(std::string_view name) {
        for (auto& n : nodes) {
            if (n.display_name() == name) return &n;
        }
        return nullptr;
    }

    NodeType& node(std::string_view name) {
        if (auto* n = find_node(name)) return *n;
        fail(SchemaError::Code::UnknownElement, "unknown node type '" + std::string(name) + "'");
    }

    NodeType& node_by_id(std::string_view id) {
        for (auto& n : nodes) {
            if (n.id == id) return n;
        }
        fail(SchemaError::Code::UnknownElement, "unknown node type id '" + std::string(id) + "'");
    }

    std::string name_of(std::string_view id) { return node_by_id(id).display_name(); }

    EdgeKey key(const EdgeType& e) { return {e.label(), name_of(e.src), name_of(e.dst)}; }

    EdgeType* find_edge(const EdgeKey& k) {
        for (auto& e : edges) {
            if (key(e) == k) return &e;
        }
        return nullptr;
    }

    EdgeType& edge(const EdgeRef& ref) {
        if (ref.id) {
            for (auto& e : edges) {
                if (e.id == *ref.id) return e;
            }
            fail(SchemaError::Code::UnknownElement, "unknown edge type id '" + *ref.id + "'");
        }
        if (auto* e = find_edge(ref.key)) return *e;
        fail(SchemaError::Code::UnknownElement, "unknown edge type " + ref.key.to_string());
    }

    std::vector<PropertyDef>& properties(const TypeRef& owner) {
        return std::visit(overloaded{
                              [&](const NodeRef& n) -> std::vector<PropertyDef>& { return node(n.name).properties; },
                              [&](const EdgeRef& e) -> std::vector<PropertyDef>& { return edge(e).properties; },
                          },
                          owner);
    }

    PropertyDef& property(const TypeRef& owner, const std::string& key) {
        auto& props = properties(owner);
        for (auto& p : props) {
            if (p.name == key) return p;
        }
        fail(SchemaError::Code::UnknownElement, "unknown property " + describe(owner) + "." + key);
    }

    // Throws unless no node type other than those in `except` uses `labels`.
    void require_free(const LabelSet& labels, std::initializer_list<std::string_view> except = {}) {
        for (const auto& n : nodes) {
            if (n.labels != labels) continue;
            if (std::find(except.begin(), except.end(), n.id) != except.end()) continue;
            fail(SchemaError::Code::DuplicateName, "node type '" + display_name(labels) + "' already exists");
        }
    }

    void require_free(const EdgeKey& k) {
        if (find_edge(k)) fail(SchemaError::Code::DuplicateName, "edge type " + k.to_string() + " already exists");
    }

    std::string fresh(char prefix) { return std::string(1, prefix) + std::to_string(next_number(prefix)); }

    // One past the largest numeric suffix among ids starting with `prefix`.
    std::uint64_t next_number(char prefix) {
        std::uint64_t next = 1;
        auto scan = [&](const std::string& id) {
            std::uint64_t n = 0;
            if (id.size() < 2 || id[0] != prefix) return;
            auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
            if (ec == std::errc{} && ptr == id.data() + id.size()) next = std::max(next, n + 1);
        };
        for (const auto& n : nodes) scan(n.id);
        for (const auto& e : edges) scan(e.id);
        return next;
    }

    void erase_node(const std::string& id) {
        std::erase_if(edges, [&](const EdgeType& e) { return e.src == id || e.dst == id; });
        for (auto& n : nodes) {
            if (n.supertype == id) n.supertype.reset();
        }
        std::erase_if(nodes, [&](const NodeType& n) { return n.id == id; });
    }

    SchemaGraph build() { return SchemaGraph(std::move(nodes), std::move(edges)); }
};

void check_card(const Cardinality& c) {
    if (c.max && (*c.max == 0 || c.min > *c.max))
        fail(SchemaError::Code::Precondition, "invalid cardinality " + c.to_string());
}

void apply_in_place(Draft& d, const BasicEdit& e) {
    std::visit(
        overloaded{
            [&](const edit::AddNodeType& op) {
                d.require_free(op.labels);
                d.nodes.push_back({d.fresh('n'), op.labels, {}, std::nullopt});
            },
            [&](const edit::RemoveNodeType& op) { d.erase_node(d.node(op.name).id); },
            [&](const edit::AddEdgeType& op) {
                EdgeType et;
                et.labels = op.labels;
                et.src = d.node(op.src).id;
                et.dst = d.node(op.dst).id;
                d.require_free(d.key(et));
                et.id = d.fresh('e');
                d.edges.push_back(std::move(et));
            },
            [&](const edit::RemoveEdgeType& op) {
                auto id = d.edge(op.edge).id;
                std::erase_if(d.edges, [&](const EdgeType& x) { return x.id == id; });
            },
            [&](const edit::AddProperty& op) {
                auto& props = d.properties(op.owner);
                for (const auto& p : props) {
                    if (p.name == op.property.name)
                        fail(SchemaError::Code::DuplicateName,
                             "property " + describe(op.owner) + "." + p.name + " already exists");
                }
                props.push_back(op.property);
            },
            [&](const edit::RemoveProperty& op) {
                d.property(op.owner, op.key);
                std::erase_if(d.properties(op.owner), [&](const PropertyDef& p) { return p.name == op.key; });
            },
            [&](const edit::SetPropertyType& op) { d.property(op.owner, op.key).type = op.type; },
            [&](const edit::SetPropertyRequired& op) { d.property(op.owner, op.key).required = op.required; },
            [&](const edit::FlipEdgeDirection& op) {
                auto& et = d.edge(op.edge);
                EdgeKey flipped{et.label(), d.name_of(et.dst), d.name_of(et.src)};
                if (et.src != et.dst) d.require_free(flipped);
                std::swap(et.src, et.dst);
                std::swap(et.out_card, et.in_card);
            },
            [&](const edit::SetCardinality& op) {
                check_card(op.out_card);
                check_card(op.in_card);
                auto& et = d.edge(op.edge);
                et.out_card = op.out_card;
                et.in_card = op.in_card;
            },
            [&](const edit::SetSupertype& op) {
                auto& sub = d.node(op.name);
                if (!op.supertype) {
                    sub.supertype.reset();
                    return;
                }
                auto super_id = d.node(*op.supertype).id;
                for (std::optional<std::string> cur = super_id; cur; cur = d.node_by_id(*cur).supertype) {
                    if (*cur == sub.id)
                        fail(SchemaError::Code::Precondition,
                             "making '" + *op.supertype + "' the supertype of '" + op.name + "' creates a cycle");
                }
                d.node(op.name).supertype = super_id;
            },
            [&](const edit::RenameType& op) {
                auto& n = d.node(op.name);
                d.require_free(op.labels, {n.id});
                n.labels = op.labels;
            },
        },
        e);
}

}  // namespace

std::string describe(const TypeRef& ref) {
    return std::visit(overloaded{
                          [](const NodeRef& n) { return n.name; },
                          [](const EdgeRef& e) { return e.id ? "edge " + *e.id : e.key.to_string(); },
                      },
                      ref);
}

SchemaGraph apply_basic_edit(const SchemaGraph& schema, const BasicEdit& e) {
    Draft d(schema);
    apply_in_place(d, e);
    return d.build();
}

SchemaGraph merge_union(const SchemaGraph& schema, const std::string& a, const std::string& b,
                        const LabelSet& labels) {
    if (a == b) fail(SchemaError::Code::Precondition, "cannot merge '" + a + "' with itself");
    Draft d(schema);
    const auto first = d.node(a);
    const auto second = d.node(b);
    d.require_free(labels, {first.id, second.id});

    NodeType merged;
    merged.id = first.id;
    merged.labels = labels;
    merged.properties = union_properties(first.properties, second.properties);
    if (first.supertype == second.supertype) merged.supertype = first.supertype;

    for (auto& n : d.nodes) {
        if (n.supertype == second.id) n.supertype = first.id;
    }
    std::erase_if(d.nodes, [&](const NodeType& n) { return n.id == second.id; });
    std::replace_if(d.nodes.begin(), d.nodes.end(), [&](const NodeType& n) { return n.id == first.id; }, merged);

    // Re-point, then fold edge types that now share (labels, src, dst).
    std::vector<EdgeType> folded;
    for (auto e : d.edges) {
        if (e.src == second.id) e.src = first.id;
        if (e.dst == second.id) e.dst = first.id;
        auto same = std::find_if(folded.begin(), folded.end(), [&](const EdgeType& x) {
            return x.labels == e.labels && x.src == e.src && x.dst == e.dst;
        });
        if (same == folded.end()) {
            folded.push_back(std::move(e));
            continue;
        }
        same->properties = union_properties(same->properties, e.properties);
        same->out_card = widen(same->out_card, e.out_card);
        same->in_card = widen(same->in_card, e.in_card);
    }
    d.edges = std::move(folded);
    return d.build();
}

SchemaGraph merge_intersection(const SchemaGraph& schema, const std::vector<std::string>& types,
                               const LabelSet& labels) {
    if (types.size() < 2)
        fail(SchemaError::Code::Precondition, "intersection needs at least two types");
    if (std::set<std::string>(types.begin(), types.end()).size() != types.size())
        fail(SchemaError::Code::Precondition, "intersection types must be distinct");
    Draft d(schema);
    std::vector<const NodeType*> inputs;
    for (const auto& t : types) inputs.push_back(&d.node(t));
    d.require_free(labels);

    NodeType common;
    common.labels = labels;
    for (const auto& p : inputs.front()->properties) {
        PropertyDef out = p;
        bool everywhere = true;
        for (const auto* t : inputs) {
            const auto* q = t->find_property(p.name);
            if (!q) {
                everywhere = false;
                break;
            }
            out.type = least_common_supertype(out.type, q->type);
            out.required = out.required && q->required;
        }
        if (everywhere) common.properties.push_back(out);
    }
    common.id = d.fresh('n');
    for (const auto& t : types) {
        auto& n = d.node(t);
        if (!n.supertype) n.supertype = common.id;
    }
    d.nodes.push_back(std::move(common));
    return d.build();
}

SchemaGraph split_node_type(const SchemaGraph& schema, const std::string& type,
                            const std::string& discriminator, const LabelSet& with_labels,
                            const LabelSet& without_labels) {
    Draft d(schema);
    const auto original = d.node(type);
    const auto* disc = original.find_property(discriminator);
    if (!disc)
        fail(SchemaError::Code::UnknownElement, "unknown property " + type + "." + discriminator);
    if (disc->required)
        fail(SchemaError::Code::Precondition,
             "property " + type + "." + discriminator + " is already required; nothing to split on");
    if (with_labels == without_labels)
        fail(SchemaError::Code::DuplicateName, "both halves of the split are named '" + display_name(with_labels) + "'");
    d.require_free(with_labels, {original.id});
    d.require_free(without_labels, {original.id});

    // The original id stays with the half that keeps the discriminator, so
    // existing subtypes and edges follow it.
    auto& with = d.node(type);
    with.labels = with_labels;
    for (auto& p : with.properties) {
        if (p.name == discriminator) p.required = true;
    }
    NodeType without = original;
    without.id = d.fresh('n');
    without.labels = without_labels;
    std::erase_if(without.properties, [&](const PropertyDef& p) { return p.name == discriminator; });
    d.nodes.push_back(without);

    std::vector<EdgeType> added;
    auto next_edge = d.next_number('e');
    for (const auto& e : d.edges) {
        bool from = e.src == original.id;
        bool to = e.dst == original.id;
        if (!from && !to) continue;
        std::vector<std::pair<std::string, std::string>> variants;
        if (from && to) {
            variants = {{original.id, without.id}, {without.id, original.id}, {without.id, without.id}};
        } else if (from) {
            variants = {{without.id, e.dst}};
        } else {
            variants = {{e.src, without.id}};
        }
        for (const auto& [src, dst] : variants) {
            EdgeType copy = e;
            copy.id = "e" + std::to_string(next_edge++);
            copy.src = src;
            copy.dst = dst;
            added.push_back(std::move(copy));
        }
    }
    for (auto& e : added) d.edges.push_back(std::move(e));
    return d.build();
}

SchemaGraph duplicate_type(const SchemaGraph& schema, const TypeRef& type, const LabelSet& labels) {
    Draft d(schema);
    std::visit(overloaded{
                   [&](const NodeRef& n) {
                       NodeType copy = d.node(n.name);
                       d.require_free(labels);
                       copy.id = d.fresh('n');
                       copy.labels = labels;
                       d.nodes.push_back(std::move(copy));
                   },
                   [&](const EdgeRef& e) {
                       EdgeType copy = d.edge(e);
                       copy.labels = labels;
                       d.require_free(d.key(copy));
                       copy.id = d.fresh('e');
                       d.edges.push_back(std::move(copy));
                   },
               },
               type);
    return d.build();
}

SchemaGraph escalate_property(const SchemaGraph& schema, const std::string& type,
                              const std::string& key, const LabelSet& node_labels,
                              const LabelSet& edge_labels) {
    Draft d(schema);
    auto& owner = d.node(type);
    const PropertyDef prop = d.property(NodeRef{type}, key);
    d.require_free(node_labels);
    const auto owner_id = owner.id;
    std::erase_if(owner.properties, [&](const PropertyDef& p) { return p.name == key; });

    NodeType target;
    target.id = d.fresh('n');
    target.labels = node_labels;
    target.properties = {{"value", prop.type, true}};
    d.nodes.push_back(target);

    EdgeType link;
    link.id = d.fresh('e');
    link.labels = edge_labels;
    link.src = owner_id;
    link.dst = target.id;
    link.out_card = prop.required ? Cardinality::exactly(1) : Cardinality{0, 1};
    d.edges.push_back(std::move(link));
    return d.build();
}

SchemaGraph apply_edit(const SchemaGraph& schema, const Edit& e) {
    return std::visit(
        overloaded{
            [&](const BasicEdit& op) { return apply_basic_edit(schema, op); },
            [&](const edit::MergeUnion& op) { return merge_union(schema, op.a, op.b, op.labels); },
            [&](const edit::MergeIntersection& op) { return merge_intersection(schema, op.types, op.labels); },
            [&](const edit::SplitNodeType& op) {
                return split_node_type(schema, op.type, op.discriminator, op.with_labels, op.without_labels);
            },
            [&](const edit::DuplicateType& op) { return duplicate_type(schema, op.type, op.labels); },
            [&](const edit::EscalateProperty& op) {
                return escalate_property(schema, op.type, op.key, op.node_labels, op.edge_labels);
            },
        },
        e);
}

}  // namespace pgschema
