#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "pgschema/diff.hpp"
#include "pgschema/error.hpp"
#include "pgschema/schema_text.hpp"

using namespace pgschema;
using pgschema::testing::Rng;
using pgschema::testing::schema_from;

namespace {

ChangeKind swapped(ChangeKind k) {
    switch (k) {
    case ChangeKind::AddedNodeType: return ChangeKind::RemovedNodeType;
    case ChangeKind::RemovedNodeType: return ChangeKind::AddedNodeType;
    case ChangeKind::AddedEdgeType: return ChangeKind::RemovedEdgeType;
    case ChangeKind::RemovedEdgeType: return ChangeKind::AddedEdgeType;
    case ChangeKind::AddedProperty: return ChangeKind::RemovedProperty;
    case ChangeKind::RemovedProperty: return ChangeKind::AddedProperty;
    default: return k;
    }
}

std::pair<SchemaGraph, SchemaGraph> random_pair(Rng& rng, int i) {
    auto old = pgschema::testing::random_schema(rng);
    if (i % 2 == 0) return {old, pgschema::testing::random_schema(rng)};
    return {old, pgschema::testing::mutate(old, rng, 1 + rng() % 8)};
}

}  // namespace

TEST(ComputeDiff, IdentityIsEmpty) {
    auto s = schema_from("NODE Person { name: STRING }");
    EXPECT_TRUE(compute_diff(s, s).empty());
}

TEST(ComputeDiff, AddedEmployee) {
    auto old = schema_from("NODE Person { name: STRING }");
    auto now = schema_from("NODE Person { name: STRING }\nNODE Employee {}");
    auto d = compute_diff(old, now);
    ASSERT_EQ(d.records.size(), 1u);
    EXPECT_EQ(d.records[0].kind, ChangeKind::AddedNodeType);
    EXPECT_EQ(d.records[0].subject.to_string(), "Employee");
    EXPECT_EQ(render_semantic(d), std::vector<std::string>{"Added node Employee"});
}

TEST(ComputeDiff, AgeStringToInteger) {
    auto old = schema_from("NODE Person { age: STRING }");
    auto now = schema_from("NODE Person { age: INTEGER }");
    auto d = compute_diff(old, now);
    ASSERT_EQ(d.records.size(), 1u);
    const auto& r = d.records[0];
    EXPECT_EQ(r.kind, ChangeKind::ChangedPropertyType);
    EXPECT_EQ(r.subject.to_string(), "Person.age");
    EXPECT_EQ(r.before, Payload{DataType::String});
    EXPECT_EQ(r.after, Payload{DataType::Integer});
    EXPECT_EQ(render_semantic(d),
              std::vector<std::string>{"Changed property type Person.age from string to integer"});
}

TEST(ComputeDiff, RenameIsRemovePlusAdd) {
    auto d = compute_diff(schema_from("NODE Person {}"), schema_from("NODE Human {}"));
    ASSERT_EQ(d.records.size(), 2u);
    EXPECT_EQ(d.records[0].kind, ChangeKind::RemovedNodeType);
    EXPECT_EQ(d.records[1].kind, ChangeKind::AddedNodeType);
}

TEST(ComputeDiff, EndpointChange) {
    auto old = schema_from("NODE A {}\nNODE B {}\nNODE C {}\nEDGE (A)-[R]->(B)");
    auto now = schema_from("NODE A {}\nNODE B {}\nNODE C {}\nEDGE (A)-[R]->(C)");
    auto d = compute_diff(old, now);
    ASSERT_EQ(d.records.size(), 1u);
    EXPECT_EQ(d.records[0].kind, ChangeKind::ChangedEdgeEndpoints);
    EXPECT_EQ(render_semantic(d.records[0]), "Changed endpoints of R from (A)->(B) to (A)->(C)");
    EXPECT_TRUE(schema_equal(apply_diff(old, d), now));
}

TEST(ComputeDiff, CanonicalOrder) {
    auto old = schema_from("NODE A { x: STRING }\nNODE B {}\nNODE Z {}");
    auto now = schema_from("NODE A { x: INTEGER, y: DATE? }\nNODE C {}\nNODE Z {}");
    auto d = compute_diff(old, now);
    std::vector<std::string> kinds;
    for (const auto& r : d.records) kinds.push_back(std::string(to_string(r.kind)) + " " + r.subject.to_string());
    EXPECT_EQ(kinds, (std::vector<std::string>{"RemovedNodeType B", "AddedProperty A.y", "AddedNodeType C",
                                               "ChangedPropertyType A.x"}));
}

TEST(ApplyDiff, EmptyDiffIsIdentity) {
    auto s = schema_from("NODE A { x: STRING }\nEDGE (A)-[R]->(A)");
    EXPECT_TRUE(schema_equal(apply_diff(s, SchemaDiff{}), s));
}

TEST(ApplyDiff, ConflictNamesRecord) {
    auto s = schema_from("NODE Employee {}");
    SchemaDiff d{{{ChangeKind::AddedNodeType, Subject{std::string("Employee"), std::nullopt}, std::monostate{},
                   NodeDecl{{"Employee"}, std::nullopt, {}}}}};
    try {
        apply_diff(s, d);
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.code(), SchemaError::Code::Conflict);
        EXPECT_NE(std::string(e.what()).find("Employee"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("AddedNodeType"), std::string::npos);
    }
}

TEST(ApplyDiff, RejectsStaleChanges) {
    auto old = schema_from("NODE A { x: STRING }");
    auto d = compute_diff(old, schema_from("NODE A { x: INTEGER }"));
    EXPECT_THROW(apply_diff(schema_from("NODE A { x: DATE }"), d), SchemaError);
    EXPECT_THROW(apply_diff(schema_from("NODE B {}"), d), SchemaError);
}

TEST(RenderSemantic, EmptyDiff) { EXPECT_TRUE(render_semantic(SchemaDiff{}).empty()); }

TEST(RenderSemantic, AllTemplates) {
    auto old = schema_from(
        "NODE A { k: STRING, r: INTEGER? }\nNODE B {}\nNODE Gone {}\nNODE S : A {}\n"
        "EDGE (A)-[R<0..1>]-><1..*>(B)\nEDGE (B)-[OLD]->(B)");
    auto now = schema_from(
        "NODE A { n: DATE?, r: INTEGER }\nNODE B {}\nNODE New {}\nNODE S {}\n"
        "EDGE (A)-[R<0..2>]-><1..1>(B)\nEDGE (B)-[NEW]->(A)");
    auto lines = render_semantic(compute_diff(old, now));
    std::set<std::string> got(lines.begin(), lines.end());
    std::set<std::string> expected{
        "Removed node Gone",
        "Removed edge OLD from B to B",
        "Removed property A.k",
        "Added node New",
        "Added edge NEW from B to A",
        "Added property A.n: date",
        "Changed property A.r to required",
        "Changed cardinality of R from A to B from out 1..*, in 0..1 to out 1..1, in 0..2",
        "Changed supertype of S from A to none",
    };
    EXPECT_EQ(got, expected);
}

TEST(AnnotateVisual, Statuses) {
    auto old = schema_from("NODE Person { age: STRING }\nNODE Old {}\nNODE Keep {}");
    auto now = schema_from("NODE Person { age: INTEGER }\nNODE Employee {}\nNODE Keep {}");
    auto d = compute_diff(old, now);
    auto v = annotate_visual(old, now, d);
    EXPECT_EQ(v.at("Employee"), (ElementAnnotation{ChangeStatus::Added, "+"}));
    EXPECT_EQ(v.at("Old"), (ElementAnnotation{ChangeStatus::Removed, "-"}));
    EXPECT_EQ(v.at("Person"), (ElementAnnotation{ChangeStatus::Modified, "~"}));
    EXPECT_EQ(v.at("Keep"), (ElementAnnotation{ChangeStatus::Unchanged, ""}));
}

TEST(AnnotateVisual, UnchangedSchema) {
    auto s = schema_from("NODE A {}\nNODE B {}\nEDGE (A)-[R]->(B)");
    auto v = annotate_visual(s, s, compute_diff(s, s));
    EXPECT_EQ(v.size(), 3u);
    for (const auto& [name, a] : v) {
        EXPECT_EQ(a.status, ChangeStatus::Unchanged) << name;
        EXPECT_EQ(a.symbol, "");
    }
}

TEST(AnnotateVisual, SymbolDeterminedByStatus) {
    Rng rng(61);
    for (int i = 0; i < 100; ++i) {
        auto [old, now] = random_pair(rng, i);
        auto v = annotate_visual(old, now, compute_diff(old, now));
        for (const auto& [name, a] : v) EXPECT_EQ(a.symbol, symbol_of(a.status));
        for (const auto& n : old.node_types()) EXPECT_TRUE(v.count(n.display_name()));
        for (const auto& n : now.node_types()) EXPECT_TRUE(v.count(n.display_name()));
    }
}

TEST(RenderRaw, LineDiff) {
    auto lines = render_raw("a\nb\nc\n", "a\nc\nd\n");
    EXPECT_EQ(lines, (std::vector<std::string>{" a", "-b", " c", "+d"}));
    EXPECT_TRUE(render_raw("", "").empty());
}

TEST(Subject, ParseIsInverse) {
    for (const char* s : {"Person", "Person.age", "Employee&Person.x", "R(A->B)", "R(A&B->_Unlabeled).w"}) {
        auto parsed = Subject::parse(s);
        ASSERT_TRUE(parsed) << s;
        EXPECT_EQ(parsed->to_string(), s);
    }
    EXPECT_FALSE(Subject::parse("R(A->"));
}

TEST(DiffJson, RoundTrip) {
    Rng rng(62);
    for (int i = 0; i < 100; ++i) {
        auto [old, now] = random_pair(rng, i);
        auto d = compute_diff(old, now);
        auto j = to_json(d);
        EXPECT_EQ(diff_from_json(j), d) << j.dump(2);
        EXPECT_EQ(diff_from_json(nlohmann::json::parse(j.dump())), d);
    }
}

TEST(DiffJson, RecordShape) {
    auto d = compute_diff(schema_from("NODE Person { age: STRING }"), schema_from("NODE Person { age: INTEGER }"));
    auto j = to_json(d);
    ASSERT_TRUE(j.is_array());
    EXPECT_EQ(j[0], nlohmann::json::parse(
                        R"({"kind":"ChangedPropertyType","subject":"Person.age","before":"STRING","after":"INTEGER"})"));
}

TEST(DiffProperty, PatchRoundTrip) {
    Rng rng(63);
    for (int i = 0; i < 300; ++i) {
        auto [old, now] = random_pair(rng, i);
        auto d = compute_diff(old, now);
        SchemaGraph patched;
        ASSERT_NO_THROW(patched = apply_diff(old, d)) << serialize_schema(old).text << "---\n" << serialize_schema(now).text;
        EXPECT_TRUE(schema_equal(patched, now)) << serialize_schema(old).text << "---\n" << serialize_schema(now).text;
        EXPECT_EQ(d.empty(), schema_equal(old, now));
    }
}

TEST(DiffProperty, AntisymmetricUnderSwap) {
    Rng rng(64);
    for (int i = 0; i < 200; ++i) {
        auto [a, b] = random_pair(rng, i);
        auto forward = compute_diff(a, b);
        auto backward = compute_diff(b, a);
        ASSERT_EQ(forward.records.size(), backward.records.size());
        std::multiset<std::string> f, r;
        for (const auto& rec : forward.records) f.insert(std::string(to_string(swapped(rec.kind))));
        for (const auto& rec : backward.records) r.insert(std::string(to_string(rec.kind)));
        EXPECT_EQ(f, r);
    }
}

TEST(DiffProperty, UniqueRecordsAndSentences) {
    Rng rng(65);
    for (int i = 0; i < 200; ++i) {
        auto [a, b] = random_pair(rng, i);
        auto d = compute_diff(a, b);
        auto lines = render_semantic(d);
        ASSERT_EQ(lines.size(), d.records.size());
        EXPECT_EQ(std::set<std::string>(lines.begin(), lines.end()).size(), lines.size());
        std::set<std::pair<std::string, std::string>> ids;
        for (const auto& r : d.records) ids.emplace(to_string(r.kind), r.subject.to_string());
        EXPECT_EQ(ids.size(), d.records.size());
    }
}

TEST(ChangeKindNames, RoundTrip) {
    for (int k = 0; k <= static_cast<int>(ChangeKind::ChangedEdgeEndpoints); ++k) {
        auto kind = static_cast<ChangeKind>(k);
        EXPECT_EQ(parse_change_kind(to_string(kind)), kind);
    }
}
