#include "pgschema/diff.hpp"

#include <algorithm>
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

using NodeDecls = std::map<std::string, NodeDecl>;
using EdgeDecls = std::map<EdgeKey, EdgeDecl>;

std::vector<PropertyDef> sorted(std::vector<PropertyDef> props) {
    std::sort(props.begin(), props.end(),
              [](const PropertyDef& a, const PropertyDef& b) { return a.name < b.name; });
    return props;
}

NodeDecls node_decls(const SchemaGraph& s) {
    NodeDecls out;
    for (const auto& n : s.node_types()) {
        std::optional<std::string> super;
        if (n.supertype) super = s.node_name(*n.supertype);
        out.emplace(n.display_name(), NodeDecl{n.labels, super, sorted(n.properties)});
    }
    return out;
}

EdgeDecls edge_decls(const SchemaGraph& s) {
    EdgeDecls out;
    for (const auto& e : s.edge_types()) {
        auto key = s.key_of(e);
        out.emplace(key, EdgeDecl{key, sorted(e.properties), e.out_card, e.in_card});
    }
    return out;
}

SchemaGraph build(const NodeDecls& nodes, const EdgeDecls& edges) {
    std::map<std::string, std::string> id_of;
    for (const auto& [name, _] : nodes) id_of.emplace(name, "n" + std::to_string(id_of.size() + 1));
    auto resolve = [&](const std::string& name) {
        auto it = id_of.find(name);
        if (it == id_of.end())
            throw SchemaError(SchemaError::Code::Conflict, "patched schema references missing node type '" + name + "'");
        return it->second;
    };
    std::vector<NodeType> node_types;
    for (const auto& [name, d] : nodes) {
        NodeType n{id_of.at(name), d.labels, d.properties, std::nullopt};
        if (d.supertype) n.supertype = resolve(*d.supertype);
        node_types.push_back(std::move(n));
    }
    std::vector<EdgeType> edge_types;
    for (const auto& [key, d] : edges) {
        EdgeType e;
        e.id = "e" + std::to_string(edge_types.size() + 1);
        auto labels = parse_display_name(key.label);
        if (!labels) throw SchemaError(SchemaError::Code::Conflict, "invalid edge label '" + key.label + "'");
        e.labels = *labels;
        e.src = resolve(key.src);
        e.dst = resolve(key.dst);
        e.properties = d.properties;
        e.out_card = d.out_card;
        e.in_card = d.in_card;
        edge_types.push_back(std::move(e));
    }
    return SchemaGraph(std::move(node_types), std::move(edge_types));
}

int group_of(ChangeKind k) {
    switch (k) {
    case ChangeKind::RemovedNodeType:
    case ChangeKind::RemovedEdgeType:
    case ChangeKind::RemovedProperty: return 0;
    case ChangeKind::AddedNodeType:
    case ChangeKind::AddedEdgeType:
    case ChangeKind::AddedProperty: return 1;
    default: return 2;
    }
}

void diff_properties(const Subject& owner, const std::vector<PropertyDef>& before,
                     const std::vector<PropertyDef>& after, std::vector<ChangeRecord>& out) {
    auto at = [&](const std::string& key) {
        Subject s = owner;
        s.key = key;
        return s;
    };
    auto find = [](const std::vector<PropertyDef>& props, const std::string& name) -> const PropertyDef* {
        for (const auto& p : props) {
            if (p.name == name) return &p;
        }
        return nullptr;
    };
    for (const auto& p : before) {
        const auto* q = find(after, p.name);
        if (!q) {
            out.push_back({ChangeKind::RemovedProperty, at(p.name), p, {}});
            continue;
        }
        if (p.type != q->type) out.push_back({ChangeKind::ChangedPropertyType, at(p.name), p.type, q->type});
        if (p.required != q->required)
            out.push_back({ChangeKind::ChangedPropertyRequired, at(p.name), p.required, q->required});
    }
    for (const auto& q : after) {
        if (!find(before, q.name)) out.push_back({ChangeKind::AddedProperty, at(q.name), {}, q});
    }
}

[[noreturn]] void conflict(const ChangeRecord& r, const std::string& why) {
    throw SchemaError(SchemaError::Code::Conflict,
                      "cannot apply " + std::string(to_string(r.kind)) + " " + r.subject.to_string() + ": " + why);
}

template <typename T>
const T& payload(const ChangeRecord& r, const Payload& p) {
    if (const auto* v = std::get_if<T>(&p)) return *v;
    conflict(r, "payload does not match record kind");
}

std::string card_pair(const CardinalityPair& c) {
    return "out " + c.out_card.to_string() + ", in " + c.in_card.to_string();
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> out;
    while (!text.empty()) {
        auto nl = text.find('\n');
        out.emplace_back(text.substr(0, nl));
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

}  // namespace

std::string_view to_string(ChangeKind kind) {
    switch (kind) {
    case ChangeKind::AddedNodeType: return "AddedNodeType";
    case ChangeKind::RemovedNodeType: return "RemovedNodeType";
    case ChangeKind::AddedEdgeType: return "AddedEdgeType";
    case ChangeKind::RemovedEdgeType: return "RemovedEdgeType";
    case ChangeKind::AddedProperty: return "AddedProperty";
    case ChangeKind::RemovedProperty: return "RemovedProperty";
    case ChangeKind::ChangedPropertyType: return "ChangedPropertyType";
    case ChangeKind::ChangedPropertyRequired: return "ChangedPropertyRequired";
    case ChangeKind::ChangedCardinality: return "ChangedCardinality";
    case ChangeKind::ChangedSupertype: return "ChangedSupertype";
    case ChangeKind::ChangedEdgeEndpoints: return "ChangedEdgeEndpoints";
    }
    return "?";
}

std::optional<ChangeKind> parse_change_kind(std::string_view text) {
    for (int k = 0; k <= static_cast<int>(ChangeKind::ChangedEdgeEndpoints); ++k) {
        if (to_string(static_cast<ChangeKind>(k)) == text) return static_cast<ChangeKind>(k);
    }
    return std::nullopt;
}

std::string Subject::to_string() const {
    std::string out = std::visit(overloaded{[](const std::string& n) { return n; },
                                            [](const EdgeKey& k) { return k.to_string(); }},
                                 type);
    if (key) out += "." + *key;
    return out;
}

std::optional<Subject> Subject::parse(std::string_view text) {
    Subject s;
    auto open = text.find('(');
    if (open != std::string_view::npos) {
        auto close = text.find(')', open);
        auto arrow = text.find("->", open);
        if (close == std::string_view::npos || arrow == std::string_view::npos || arrow > close) return std::nullopt;
        EdgeKey k{std::string(text.substr(0, open)), std::string(text.substr(open + 1, arrow - open - 1)),
                  std::string(text.substr(arrow + 2, close - arrow - 2))};
        if (!parse_display_name(k.label) || !parse_display_name(k.src) || !parse_display_name(k.dst))
            return std::nullopt;
        s.type = std::move(k);
        text.remove_prefix(close + 1);
        if (text.empty()) return s;
        if (text.front() != '.') return std::nullopt;
        text.remove_prefix(1);
    } else {
        auto dot = text.find('.');
        auto name = text.substr(0, dot);
        if (!parse_display_name(name)) return std::nullopt;
        s.type = std::string(name);
        if (dot == std::string_view::npos) return s;
        text.remove_prefix(dot + 1);
    }
    if (!is_identifier(text)) return std::nullopt;
    s.key = std::string(text);
    return s;
}

SchemaDiff compute_diff(const SchemaGraph& before, const SchemaGraph& after) {
    std::vector<ChangeRecord> out;
    const auto old_nodes = node_decls(before);
    const auto new_nodes = node_decls(after);
    for (const auto& [name, d] : old_nodes) {
        auto it = new_nodes.find(name);
        if (it == new_nodes.end()) {
            out.push_back({ChangeKind::RemovedNodeType, {name, {}}, d, {}});
            continue;
        }
        diff_properties({name, {}}, d.properties, it->second.properties, out);
        if (d.supertype != it->second.supertype)
            out.push_back({ChangeKind::ChangedSupertype, {name, {}}, SupertypeRef{d.supertype},
                           SupertypeRef{it->second.supertype}});
    }
    for (const auto& [name, d] : new_nodes) {
        if (!old_nodes.count(name)) out.push_back({ChangeKind::AddedNodeType, {name, {}}, {}, d});
    }

    const auto old_edges = edge_decls(before);
    const auto new_edges = edge_decls(after);
    std::map<std::string, std::vector<const EdgeDecl*>> gone;
    std::map<std::string, std::vector<const EdgeDecl*>> fresh;
    for (const auto& [key, d] : old_edges) {
        auto it = new_edges.find(key);
        if (it == new_edges.end()) {
            gone[key.label].push_back(&d);
            continue;
        }
        diff_properties({key, {}}, d.properties, it->second.properties, out);
        if (d.out_card != it->second.out_card || d.in_card != it->second.in_card)
            out.push_back({ChangeKind::ChangedCardinality, {key, {}}, CardinalityPair{d.out_card, d.in_card},
                           CardinalityPair{it->second.out_card, it->second.in_card}});
    }
    for (const auto& [key, d] : new_edges) {
        if (!old_edges.count(key)) fresh[key.label].push_back(&d);
    }
    for (const auto& [label, olds] : gone) {
        auto it = fresh.find(label);
        if (olds.size() == 1 && it != fresh.end() && it->second.size() == 1) {
            const auto* o = olds.front();
            const auto* n = it->second.front();
            if (o->properties == n->properties && o->out_card == n->out_card && o->in_card == n->in_card) {
                out.push_back({ChangeKind::ChangedEdgeEndpoints, {o->key, {}}, Endpoints{o->key.src, o->key.dst},
                               Endpoints{n->key.src, n->key.dst}});
                fresh.erase(it);
                continue;
            }
        }
        for (const auto* o : olds) out.push_back({ChangeKind::RemovedEdgeType, {o->key, {}}, *o, {}});
    }
    for (const auto& [label, news] : fresh) {
        for (const auto* n : news) out.push_back({ChangeKind::AddedEdgeType, {n->key, {}}, {}, *n});
    }

    std::stable_sort(out.begin(), out.end(), [](const ChangeRecord& a, const ChangeRecord& b) {
        auto ga = group_of(a.kind);
        auto gb = group_of(b.kind);
        if (ga != gb) return ga < gb;
        auto sa = a.subject.to_string();
        auto sb = b.subject.to_string();
        if (sa != sb) return sa < sb;
        return a.kind < b.kind;
    });
    return {std::move(out)};
}

SchemaGraph apply_diff(const SchemaGraph& base, const SchemaDiff& diff) {
    auto nodes = node_decls(base);
    auto edges = edge_decls(base);

    auto node_of = [&](const ChangeRecord& r) -> NodeDecl& {
        const auto* name = std::get_if<std::string>(&r.subject.type);
        if (!name) conflict(r, "subject is not a node type");
        auto it = nodes.find(*name);
        if (it == nodes.end()) conflict(r, "node type does not exist");
        return it->second;
    };
    auto edge_of = [&](const ChangeRecord& r) -> EdgeDecl& {
        const auto* key = std::get_if<EdgeKey>(&r.subject.type);
        if (!key) conflict(r, "subject is not an edge type");
        auto it = edges.find(*key);
        if (it == edges.end()) conflict(r, "edge type does not exist");
        return it->second;
    };
    auto props_of = [&](const ChangeRecord& r) -> std::vector<PropertyDef>& {
        if (!r.subject.key) conflict(r, "subject names no property");
        if (std::holds_alternative<std::string>(r.subject.type)) return node_of(r).properties;
        return edge_of(r).properties;
    };
    auto prop_of = [&](const ChangeRecord& r) -> PropertyDef& {
        auto& props = props_of(r);
        for (auto& p : props) {
            if (p.name == *r.subject.key) return p;
        }
        conflict(r, "property does not exist");
    };

    // Phases run in dependency order regardless of record order.
    auto each = [&](std::initializer_list<ChangeKind> kinds, auto&& fn) {
        for (const auto& r : diff.records) {
            if (std::find(kinds.begin(), kinds.end(), r.kind) != kinds.end()) fn(r);
        }
    };
    each({ChangeKind::RemovedEdgeType}, [&](const ChangeRecord& r) {
        edges.erase(edge_of(r).key);
    });
    each({ChangeKind::RemovedProperty}, [&](const ChangeRecord& r) {
        prop_of(r);
        std::erase_if(props_of(r), [&](const PropertyDef& p) { return p.name == *r.subject.key; });
    });
    each({ChangeKind::AddedNodeType}, [&](const ChangeRecord& r) {
        const auto* name = std::get_if<std::string>(&r.subject.type);
        if (!name || r.subject.key) conflict(r, "subject is not a node type");
        if (nodes.count(*name)) conflict(r, "node type already exists");
        auto decl = payload<NodeDecl>(r, r.after);
        if (display_name(decl.labels) != *name) conflict(r, "payload labels do not match the subject");
        decl.supertype.reset();
        decl.properties = sorted(decl.properties);
        nodes.emplace(*name, std::move(decl));
    });
    each({ChangeKind::ChangedEdgeEndpoints}, [&](const ChangeRecord& r) {
        auto decl = edge_of(r);
        const auto& to = payload<Endpoints>(r, r.after);
        if (!nodes.count(to.src) || !nodes.count(to.dst)) conflict(r, "new endpoint does not exist");
        edges.erase(decl.key);
        decl.key.src = to.src;
        decl.key.dst = to.dst;
        if (!edges.emplace(decl.key, decl).second) conflict(r, "edge type with the new endpoints already exists");
    });
    each({ChangeKind::RemovedNodeType}, [&](const ChangeRecord& r) {
        auto name = std::get<std::string>(r.subject.type);
        node_of(r);
        nodes.erase(name);
        std::erase_if(edges, [&](const auto& kv) { return kv.first.src == name || kv.first.dst == name; });
        for (auto& [_, n] : nodes) {
            if (n.supertype == name) n.supertype.reset();
        }
    });
    each({ChangeKind::AddedNodeType}, [&](const ChangeRecord& r) {
        const auto& decl = payload<NodeDecl>(r, r.after);
        if (decl.supertype && !nodes.count(*decl.supertype)) conflict(r, "supertype does not exist");
        nodes.at(std::get<std::string>(r.subject.type)).supertype = decl.supertype;
    });
    each({ChangeKind::AddedEdgeType}, [&](const ChangeRecord& r) {
        const auto* key = std::get_if<EdgeKey>(&r.subject.type);
        if (!key || r.subject.key) conflict(r, "subject is not an edge type");
        if (edges.count(*key)) conflict(r, "edge type already exists");
        if (!nodes.count(key->src) || !nodes.count(key->dst)) conflict(r, "endpoint does not exist");
        auto decl = payload<EdgeDecl>(r, r.after);
        decl.key = *key;
        decl.properties = sorted(decl.properties);
        edges.emplace(*key, std::move(decl));
    });
    each({ChangeKind::AddedProperty}, [&](const ChangeRecord& r) {
        auto& props = props_of(r);
        const auto& p = payload<PropertyDef>(r, r.after);
        if (p.name != *r.subject.key) conflict(r, "payload name does not match the subject");
        for (const auto& q : props) {
            if (q.name == p.name) conflict(r, "property already exists");
        }
        props.push_back(p);
        props = sorted(std::move(props));
    });
    // Changes must start from the recorded "before" value.
    each({ChangeKind::ChangedPropertyType}, [&](const ChangeRecord& r) {
        auto& p = prop_of(r);
        if (p.type != payload<DataType>(r, r.before)) conflict(r, "current datatype differs from the recorded one");
        p.type = payload<DataType>(r, r.after);
    });
    each({ChangeKind::ChangedPropertyRequired}, [&](const ChangeRecord& r) {
        auto& p = prop_of(r);
        if (p.required != payload<bool>(r, r.before)) conflict(r, "current optionality differs from the recorded one");
        p.required = payload<bool>(r, r.after);
    });
    each({ChangeKind::ChangedCardinality}, [&](const ChangeRecord& r) {
        auto& e = edge_of(r);
        if (CardinalityPair{e.out_card, e.in_card} != payload<CardinalityPair>(r, r.before))
            conflict(r, "current cardinality differs from the recorded one");
        const auto& c = payload<CardinalityPair>(r, r.after);
        e.out_card = c.out_card;
        e.in_card = c.in_card;
    });
    each({ChangeKind::ChangedSupertype}, [&](const ChangeRecord& r) {
        auto& n = node_of(r);
        const auto& was = payload<SupertypeRef>(r, r.before);
        // A removed supertype has already been cleared by the cascade.
        bool cascaded = !n.supertype && was.name && !nodes.count(*was.name);
        if (n.supertype != was.name && !cascaded) conflict(r, "current supertype differs from the recorded one");
        const auto& s = payload<SupertypeRef>(r, r.after);
        if (s.name && !nodes.count(*s.name)) conflict(r, "supertype does not exist");
        n.supertype = s.name;
    });

    try {
        return build(nodes, edges);
    } catch (const SchemaError& e) {
        if (e.code() == SchemaError::Code::Conflict) throw;
        throw SchemaError(SchemaError::Code::Conflict, std::string("patched schema is invalid: ") + e.what());
    }
}

std::string render_semantic(const ChangeRecord& r) {
    const auto subject = r.subject.to_string();
    auto edge_phrase = [&] {
        const auto& k = std::get<EdgeKey>(r.subject.type);
        return k.label + " from " + k.src + " to " + k.dst;
    };
    switch (r.kind) {
    case ChangeKind::AddedNodeType: return "Added node " + subject;
    case ChangeKind::RemovedNodeType: return "Removed node " + subject;
    case ChangeKind::AddedEdgeType: return "Added edge " + edge_phrase();
    case ChangeKind::RemovedEdgeType: return "Removed edge " + edge_phrase();
    case ChangeKind::AddedProperty:
        return "Added property " + subject + ": " +
               std::string(to_lower_string(std::get<PropertyDef>(r.after).type));
    case ChangeKind::RemovedProperty: return "Removed property " + subject;
    case ChangeKind::ChangedPropertyType:
        return "Changed property type " + subject + " from " +
               std::string(to_lower_string(std::get<DataType>(r.before))) + " to " +
               std::string(to_lower_string(std::get<DataType>(r.after)));
    case ChangeKind::ChangedPropertyRequired:
        return "Changed property " + subject + " to " + (std::get<bool>(r.after) ? "required" : "optional");
    case ChangeKind::ChangedCardinality: {
        const auto& a = std::get<CardinalityPair>(r.before);
        const auto& b = std::get<CardinalityPair>(r.after);
        return "Changed cardinality of " + edge_phrase() + " from " + card_pair(a) + " to " + card_pair(b);
    }
    case ChangeKind::ChangedSupertype: {
        auto name = [](const Payload& p) { return std::get<SupertypeRef>(p).name.value_or("none"); };
        return "Changed supertype of " + subject + " from " + name(r.before) + " to " + name(r.after);
    }
    case ChangeKind::ChangedEdgeEndpoints: {
        const auto& a = std::get<Endpoints>(r.before);
        const auto& b = std::get<Endpoints>(r.after);
        return "Changed endpoints of " + std::get<EdgeKey>(r.subject.type).label + " from (" + a.src + ")->(" +
               a.dst + ") to (" + b.src + ")->(" + b.dst + ")";
    }
    }
    return subject;
}

std::vector<std::string> render_semantic(const SchemaDiff& diff) {
    std::vector<std::string> out;
    out.reserve(diff.records.size());
    for (const auto& r : diff.records) out.push_back(render_semantic(r));
    return out;
}

std::vector<std::string> render_raw(std::string_view before, std::string_view after) {
    const auto a = split_lines(before);
    const auto b = split_lines(after);
    // lcs[i][j] = LCS length of a[i..] and b[j..]
    std::vector<std::vector<std::size_t>> lcs(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = a.size(); i-- > 0;) {
        for (std::size_t j = b.size(); j-- > 0;) {
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
        }
    }
    std::vector<std::string> out;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (i < a.size() && j < b.size() && a[i] == b[j]) {
            out.push_back(" " + a[i]);
            ++i;
            ++j;
        } else if (i < a.size() && (j == b.size() || lcs[i + 1][j] >= lcs[i][j + 1])) {
            out.push_back("-" + a[i++]);
        } else {
            out.push_back("+" + b[j++]);
        }
    }
    return out;
}

std::string_view to_string(ChangeStatus status) {
    switch (status) {
    case ChangeStatus::Unchanged: return "unchanged";
    case ChangeStatus::Added: return "added";
    case ChangeStatus::Removed: return "removed";
    case ChangeStatus::Modified: return "modified";
    }
    return "unchanged";
}

std::string_view symbol_of(ChangeStatus status) {
    switch (status) {
    case ChangeStatus::Unchanged: return "";
    case ChangeStatus::Added: return "+";
    case ChangeStatus::Removed: return "-";
    case ChangeStatus::Modified: return "~";
    }
    return "";
}

VisualAnnotation annotate_visual(const SchemaGraph& before, const SchemaGraph& after, const SchemaDiff& diff) {
    VisualAnnotation out;
    auto mark = [&](const std::string& key, ChangeStatus status) {
        auto& a = out[key];
        // Added and removed win over modified.
        if (a.status == ChangeStatus::Unchanged || status != ChangeStatus::Modified) {
            a.status = status;
            a.symbol = std::string(symbol_of(status));
        }
    };
    for (const auto* s : {&before, &after}) {
        for (const auto& n : s->node_types()) out[n.display_name()];
        for (const auto& e : s->edge_types()) out[s->key_of(e).to_string()];
    }
    for (const auto& r : diff.records) {
        Subject type_only{r.subject.type, std::nullopt};
        const auto key = type_only.to_string();
        switch (r.kind) {
        case ChangeKind::AddedNodeType:
        case ChangeKind::AddedEdgeType: mark(key, ChangeStatus::Added); break;
        case ChangeKind::RemovedNodeType:
        case ChangeKind::RemovedEdgeType: mark(key, ChangeStatus::Removed); break;
        case ChangeKind::ChangedEdgeEndpoints: {
            mark(key, ChangeStatus::Modified);
            auto moved = std::get<EdgeKey>(r.subject.type);
            const auto& to = std::get<Endpoints>(r.after);
            moved.src = to.src;
            moved.dst = to.dst;
            mark(moved.to_string(), ChangeStatus::Modified);
            break;
        }
        default: mark(key, ChangeStatus::Modified); break;
        }
    }
    return out;
}

}  // namespace pgschema
