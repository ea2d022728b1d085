#include "pgschema/edit_json.hpp"

#include "pgschema/error.hpp"

namespace pgschema {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& message) {
    throw SchemaError(SchemaError::Code::Precondition, "invalid edit command: " + message);
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) bad(std::string("missing field '") + name + "'");
    return *it;
}

std::string text(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

bool flag(const json& j, const char* name, std::optional<bool> fallback = std::nullopt) {
    auto it = j.find(name);
    if (it == j.end()) {
        if (fallback) return *fallback;
        bad(std::string("missing field '") + name + "'");
    }
    if (!it->is_boolean()) bad(std::string("field '") + name + "' must be a boolean");
    return it->get<bool>();
}

LabelSet labels(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (v.is_string()) {
        if (auto parsed = parse_display_name(v.get<std::string>())) return *parsed;
        bad("'" + v.get<std::string>() + "' is not a valid type name");
    }
    if (v.is_array()) {
        LabelSet out;
        for (const auto& l : v) {
            if (!l.is_string()) bad(std::string("field '") + name + "' must hold strings");
            out.insert(l.get<std::string>());
        }
        return out;
    }
    bad(std::string("field '") + name + "' must be a name or an array of labels");
}

DataType datatype(const json& j, const char* name) {
    auto t = parse_datatype(text(j, name));
    if (!t) bad("unknown datatype '" + text(j, name) + "'");
    return *t;
}

EdgeRef edge_ref(const json& v) {
    if (v.is_string()) return EdgeRef::by_id(v.get<std::string>());
    if (!v.is_object()) bad("edge reference must be an id or {label, src, dst}");
    if (v.contains("id")) return EdgeRef::by_id(text(v, "id"));
    return EdgeRef::by_key({text(v, "label"), text(v, "src"), text(v, "dst")});
}

TypeRef type_ref(const json& v) {
    if (v.is_string()) return NodeRef{v.get<std::string>()};
    return edge_ref(v);
}

Cardinality cardinality(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) return {};
    const auto& v = *it;
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() ||
        !(v[1].is_null() || v[1].is_number_unsigned()))
        bad(std::string("field '") + name + "' must be [min, max|null]");
    Cardinality c;
    c.min = v[0].get<std::uint64_t>();
    if (!v[1].is_null()) c.max = v[1].get<std::uint64_t>();
    return c;
}

json to_json(const EdgeRef& ref) {
    if (ref.id) return *ref.id;
    return {{"label", ref.key.label}, {"src", ref.key.src}, {"dst", ref.key.dst}};
}

json to_json(const TypeRef& ref) {
    return std::visit(overloaded{[](const NodeRef& n) -> json { return n.name; },
                                 [](const EdgeRef& e) { return to_json(e); }},
                      ref);
}

json to_json(const Cardinality& c) {
    return json::array({c.min, c.max ? json(*c.max) : json(nullptr)});
}

}  // namespace

Edit edit_from_json(const json& cmd) {
    if (!cmd.is_object()) bad("command must be a JSON object");
    const auto op = text(cmd, "op");
    if (op == "add-node") return BasicEdit{edit::AddNodeType{labels(cmd, "labels")}};
    if (op == "remove-node") return BasicEdit{edit::RemoveNodeType{text(cmd, "type")}};
    if (op == "add-edge")
        return BasicEdit{edit::AddEdgeType{labels(cmd, "label"), text(cmd, "src"), text(cmd, "dst")}};
    if (op == "remove-edge") return BasicEdit{edit::RemoveEdgeType{edge_ref(field(cmd, "edge"))}};
    if (op == "add-property") {
        PropertyDef p{text(cmd, "name"), datatype(cmd, "datatype"), flag(cmd, "required", false)};
        return BasicEdit{edit::AddProperty{type_ref(field(cmd, "owner")), p}};
    }
    if (op == "remove-property")
        return BasicEdit{edit::RemoveProperty{type_ref(field(cmd, "owner")), text(cmd, "key")}};
    if (op == "set-property-type")
        return BasicEdit{edit::SetPropertyType{type_ref(field(cmd, "owner")), text(cmd, "key"),
                                               datatype(cmd, "datatype")}};
    if (op == "set-property-required")
        return BasicEdit{edit::SetPropertyRequired{type_ref(field(cmd, "owner")), text(cmd, "key"),
                                                   flag(cmd, "required")}};
    if (op == "flip-edge") return BasicEdit{edit::FlipEdgeDirection{edge_ref(field(cmd, "edge"))}};
    if (op == "set-cardinality")
        return BasicEdit{edit::SetCardinality{edge_ref(field(cmd, "edge")), cardinality(cmd, "outCard"),
                                              cardinality(cmd, "inCard")}};
    if (op == "set-supertype") {
        const auto& super = field(cmd, "supertype");
        std::optional<std::string> name;
        if (!super.is_null()) name = text(cmd, "supertype");
        return BasicEdit{edit::SetSupertype{text(cmd, "type"), name}};
    }
    if (op == "rename") return BasicEdit{edit::RenameType{text(cmd, "type"), labels(cmd, "to")}};
    if (op == "merge-union")
        return edit::MergeUnion{text(cmd, "a"), text(cmd, "b"), labels(cmd, "into")};
    if (op == "merge-intersection") {
        const auto& types = field(cmd, "types");
        if (!types.is_array()) bad("field 'types' must be an array of names");
        std::vector<std::string> names;
        for (const auto& t : types) {
            if (!t.is_string()) bad("field 'types' must be an array of names");
            names.push_back(t.get<std::string>());
        }
        return edit::MergeIntersection{names, labels(cmd, "into")};
    }
    if (op == "split")
        return edit::SplitNodeType{text(cmd, "type"), text(cmd, "discriminator"), labels(cmd, "with"),
                                   labels(cmd, "without")};
    if (op == "duplicate") return edit::DuplicateType{type_ref(field(cmd, "type")), labels(cmd, "as")};
    if (op == "escalate")
        return edit::EscalateProperty{text(cmd, "type"), text(cmd, "key"), labels(cmd, "node"),
                                      labels(cmd, "edge")};
    bad("unknown op '" + op + "'");
}

json edit_to_json(const Edit& e) {
    auto basic = [](const BasicEdit& b) -> json {
        return std::visit(
            overloaded{
                [](const edit::AddNodeType& op) -> json {
                    return {{"op", "add-node"}, {"labels", display_name(op.labels)}};
                },
                [](const edit::RemoveNodeType& op) -> json { return {{"op", "remove-node"}, {"type", op.name}}; },
                [](const edit::AddEdgeType& op) -> json {
                    return {{"op", "add-edge"}, {"label", display_name(op.labels)}, {"src", op.src}, {"dst", op.dst}};
                },
                [](const edit::RemoveEdgeType& op) -> json { return {{"op", "remove-edge"}, {"edge", to_json(op.edge)}}; },
                [](const edit::AddProperty& op) -> json {
                    return {{"op", "add-property"}, {"owner", to_json(op.owner)}, {"name", op.property.name},
                            {"datatype", to_string(op.property.type)}, {"required", op.property.required}};
                },
                [](const edit::RemoveProperty& op) -> json {
                    return {{"op", "remove-property"}, {"owner", to_json(op.owner)}, {"key", op.key}};
                },
                [](const edit::SetPropertyType& op) -> json {
                    return {{"op", "set-property-type"}, {"owner", to_json(op.owner)}, {"key", op.key},
                            {"datatype", to_string(op.type)}};
                },
                [](const edit::SetPropertyRequired& op) -> json {
                    return {{"op", "set-property-required"}, {"owner", to_json(op.owner)}, {"key", op.key},
                            {"required", op.required}};
                },
                [](const edit::FlipEdgeDirection& op) -> json { return {{"op", "flip-edge"}, {"edge", to_json(op.edge)}}; },
                [](const edit::SetCardinality& op) -> json {
                    return {{"op", "set-cardinality"}, {"edge", to_json(op.edge)}, {"outCard", to_json(op.out_card)},
                            {"inCard", to_json(op.in_card)}};
                },
                [](const edit::SetSupertype& op) -> json {
                    return {{"op", "set-supertype"}, {"type", op.name},
                            {"supertype", op.supertype ? json(*op.supertype) : json(nullptr)}};
                },
                [](const edit::RenameType& op) -> json {
                    return {{"op", "rename"}, {"type", op.name}, {"to", display_name(op.labels)}};
                },
            },
            b);
    };
    return std::visit(
        overloaded{
            basic,
            [](const edit::MergeUnion& op) -> json {
                return {{"op", "merge-union"}, {"a", op.a}, {"b", op.b}, {"into", display_name(op.labels)}};
            },
            [](const edit::MergeIntersection& op) -> json {
                return {{"op", "merge-intersection"}, {"types", op.types}, {"into", display_name(op.labels)}};
            },
            [](const edit::SplitNodeType& op) -> json {
                return {{"op", "split"}, {"type", op.type}, {"discriminator", op.discriminator},
                        {"with", display_name(op.with_labels)}, {"without", display_name(op.without_labels)}};
            },
            [](const edit::DuplicateType& op) -> json {
                return {{"op", "duplicate"}, {"type", to_json(op.type)}, {"as", display_name(op.labels)}};
            },
            [](const edit::EscalateProperty& op) -> json {
                return {{"op", "escalate"}, {"type", op.type}, {"key", op.key}, {"node", display_name(op.node_labels)},
                        {"edge", display_name(op.edge_labels)}};
            },
        },
        e);
}

}  // namespace pgschema
