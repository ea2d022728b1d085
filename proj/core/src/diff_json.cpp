#include "pgschema/diff.hpp"
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
    throw SchemaError(SchemaError::Code::Precondition, "invalid diff JSON: " + message);
}

json card_json(const Cardinality& c) { return json::array({c.min, c.max ? json(*c.max) : json(nullptr)}); }

Cardinality card_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !(j[1].is_null() || j[1].is_number_unsigned()))
        bad("cardinality must be [min, max|null]");
    Cardinality c;
    c.min = j[0].get<std::uint64_t>();
    if (!j[1].is_null()) c.max = j[1].get<std::uint64_t>();
    return c;
}

json prop_json(const PropertyDef& p) {
    return {{"name", p.name}, {"type", to_string(p.type)}, {"required", p.required}};
}

PropertyDef prop_from(const json& j) {
    try {
        auto type = parse_datatype(j.at("type").get<std::string>());
        if (!type) bad("unknown datatype");
        return {j.at("name").get<std::string>(), *type, j.at("required").get<bool>()};
    } catch (const json::exception& e) {
        bad(e.what());
    }
}

json props_json(const std::vector<PropertyDef>& props) {
    json out = json::array();
    for (const auto& p : props) out.push_back(prop_json(p));
    return out;
}

std::vector<PropertyDef> props_from(const json& j) {
    if (!j.is_array()) bad("properties must be an array");
    std::vector<PropertyDef> out;
    for (const auto& p : j) out.push_back(prop_from(p));
    return out;
}

json payload_json(const Payload& p) {
    return std::visit(
        overloaded{
            [](std::monostate) -> json { return nullptr; },
            [](const NodeDecl& d) -> json {
                return {{"labels", d.labels}, {"supertype", d.supertype ? json(*d.supertype) : json(nullptr)},
                        {"properties", props_json(d.properties)}};
            },
            [](const EdgeDecl& d) -> json {
                return {{"label", d.key.label}, {"src", d.key.src}, {"dst", d.key.dst},
                        {"outCard", card_json(d.out_card)}, {"inCard", card_json(d.in_card)},
                        {"properties", props_json(d.properties)}};
            },
            [](const PropertyDef& d) -> json { return prop_json(d); },
            [](DataType t) -> json { return to_string(t); },
            [](bool b) -> json { return b; },
            [](const CardinalityPair& c) -> json {
                return {{"outCard", card_json(c.out_card)}, {"inCard", card_json(c.in_card)}};
            },
            [](const SupertypeRef& s) -> json { return s.name ? json(*s.name) : json(nullptr); },
            [](const Endpoints& e) -> json { return {{"src", e.src}, {"dst", e.dst}}; },
        },
        p);
}

Payload payload_from(ChangeKind kind, const json& j, bool after) {
    try {
        switch (kind) {
        case ChangeKind::AddedNodeType:
        case ChangeKind::RemovedNodeType: {
            if (after != (kind == ChangeKind::AddedNodeType)) return {};
            NodeDecl d;
            d.labels = j.at("labels").get<LabelSet>();
            if (!j.at("supertype").is_null()) d.supertype = j.at("supertype").get<std::string>();
            d.properties = props_from(j.at("properties"));
            return d;
        }
        case ChangeKind::AddedEdgeType:
        case ChangeKind::RemovedEdgeType: {
            if (after != (kind == ChangeKind::AddedEdgeType)) return {};
            EdgeDecl d;
            d.key = {j.at("label").get<std::string>(), j.at("src").get<std::string>(), j.at("dst").get<std::string>()};
            d.out_card = card_from(j.at("outCard"));
            d.in_card = card_from(j.at("inCard"));
            d.properties = props_from(j.at("properties"));
            return d;
        }
        case ChangeKind::AddedProperty:
        case ChangeKind::RemovedProperty:
            if (after != (kind == ChangeKind::AddedProperty)) return {};
            return prop_from(j);
        case ChangeKind::ChangedPropertyType: {
            auto t = parse_datatype(j.get<std::string>());
            if (!t) bad("unknown datatype");
            return *t;
        }
        case ChangeKind::ChangedPropertyRequired: return j.get<bool>();
        case ChangeKind::ChangedCardinality:
            return CardinalityPair{card_from(j.at("outCard")), card_from(j.at("inCard"))};
        case ChangeKind::ChangedSupertype:
            return SupertypeRef{j.is_null() ? std::nullopt : std::optional<std::string>(j.get<std::string>())};
        case ChangeKind::ChangedEdgeEndpoints:
            return Endpoints{j.at("src").get<std::string>(), j.at("dst").get<std::string>()};
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }
    return {};
}

}  // namespace

json to_json(const ChangeRecord& r) {
    return {{"kind", to_string(r.kind)},
            {"subject", r.subject.to_string()},
            {"before", payload_json(r.before)},
            {"after", payload_json(r.after)}};
}

json to_json(const SchemaDiff& diff) {
    json out = json::array();
    for (const auto& r : diff.records) out.push_back(to_json(r));
    return out;
}

json to_json(const VisualAnnotation& annotation) {
    json out = json::object();
    for (const auto& [name, a] : annotation) {
        out[name] = {{"status", to_string(a.status)}, {"symbol", a.symbol}};
    }
    return out;
}

SchemaDiff diff_from_json(const json& j) {
    if (!j.is_array()) bad("expected an array of records");
    SchemaDiff diff;
    for (const auto& r : j) {
        if (!r.is_object() || !r.contains("kind") || !r["kind"].is_string() || !r.contains("subject") ||
            !r["subject"].is_string())
            bad("record needs string 'kind' and 'subject'");
        auto kind = parse_change_kind(r["kind"].get<std::string>());
        if (!kind) bad("unknown kind '" + r["kind"].get<std::string>() + "'");
        auto subject = Subject::parse(r["subject"].get<std::string>());
        if (!subject) bad("unparseable subject '" + r["subject"].get<std::string>() + "'");
        ChangeRecord rec{*kind, *subject, {}, {}};
        auto before = r.value("before", json(nullptr));
        auto after = r.value("after", json(nullptr));
        // A null supertype is a value, not an absent payload.
        bool nullable = *kind == ChangeKind::ChangedSupertype;
        if (nullable || !before.is_null()) rec.before = payload_from(*kind, before, false);
        if (nullable || !after.is_null()) rec.after = payload_from(*kind, after, true);
        diff.records.push_back(std::move(rec));
    }
    return diff;
}

}  // namespace pgschema
