#include "pgschema/compat.hpp"

namespace pgschema {

namespace {

bool requires_edges(const Cardinality& c) { return c.min > 0; }

// True when `after` admits fewer counts than `before`.
bool tightens(const Cardinality& before, const Cardinality& after) {
    if (after.min > before.min) return true;
    if (!after.max) return false;
    return !before.max || *after.max < *before.max;
}

}  // namespace

CompatReport check_compat(const SchemaDiff& diff) {
    CompatReport report;
    auto violate = [&](const ChangeRecord& r, std::string reason) {
        report.violations.push_back({r, std::move(reason)});
    };
    for (const auto& r : diff.records) {
        switch (r.kind) {
        case ChangeKind::RemovedNodeType:
        case ChangeKind::RemovedEdgeType:
        case ChangeKind::RemovedProperty:
            violate(r, "removes " + r.subject.to_string());
            break;
        case ChangeKind::AddedProperty:
            if (std::get<PropertyDef>(r.after).required)
                violate(r, "adds required property " + r.subject.to_string() + " that existing data lacks");
            break;
        case ChangeKind::AddedEdgeType: {
            const auto& e = std::get<EdgeDecl>(r.after);
            if (requires_edges(e.out_card) || requires_edges(e.in_card))
                violate(r, "adds edge type " + r.subject.to_string() + " with a minimum cardinality above zero");
            break;
        }
        case ChangeKind::ChangedPropertyType: {
            auto from = std::get<DataType>(r.before);
            auto to = std::get<DataType>(r.after);
            if (!is_subtype(from, to))
                violate(r, "narrows " + r.subject.to_string() + " from " + std::string(to_lower_string(from)) +
                               " to " + std::string(to_lower_string(to)));
            break;
        }
        case ChangeKind::ChangedPropertyRequired:
            if (std::get<bool>(r.after)) violate(r, "makes " + r.subject.to_string() + " required");
            break;
        case ChangeKind::ChangedCardinality: {
            const auto& from = std::get<CardinalityPair>(r.before);
            const auto& to = std::get<CardinalityPair>(r.after);
            if (tightens(from.out_card, to.out_card) || tightens(from.in_card, to.in_card))
                violate(r, "tightens the cardinality of " + r.subject.to_string());
            break;
        }
        case ChangeKind::ChangedEdgeEndpoints:
            violate(r, "changes the endpoints of " + r.subject.to_string());
            break;
        case ChangeKind::AddedNodeType:
        case ChangeKind::ChangedSupertype:
            break;
        }
    }
    return report;
}

nlohmann::json to_json(const CompatReport& report) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"record", to_json(v.record)}, {"reason", v.reason}});
    }
    return {{"compatible", report.compatible()}, {"violations", violations}};
}

}  // namespace pgschema
