#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "generators.hpp"
#include "pgschema/error.hpp"
#include "pgschema/schema.hpp"

using namespace pgschema;
using pgschema::testing::Rng;

namespace {

const DataType kAll[] = {DataType::String, DataType::Integer, DataType::Float,
                         DataType::Boolean, DataType::Date, DataType::Any};

// Order relation written out by hand: reflexive pairs, INTEGER < FLOAT, and
// everything below ANY.
bool below(DataType a, DataType b) {
    return a == b || b == DataType::Any || (a == DataType::Integer && b == DataType::Float);
}

// Least upper bound by enumeration of all upper bounds.
DataType lub_oracle(DataType a, DataType b) {
    std::vector<DataType> upper;
    for (auto t : kAll)
        if (below(a, t) && below(b, t)) upper.push_back(t);
    for (auto u : upper) {
        if (std::all_of(upper.begin(), upper.end(), [&](DataType v) { return below(u, v); })) return u;
    }
    throw std::logic_error("no lub");
}

SchemaError::Code code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no SchemaError";
    return SchemaError::Code::Conflict;
}

}  // namespace

TEST(DataTypeLattice, Examples) {
    EXPECT_EQ(least_common_supertype(DataType::Integer, DataType::Integer), DataType::Integer);
    EXPECT_EQ(least_common_supertype(DataType::Integer, DataType::Float), DataType::Float);
    EXPECT_EQ(least_common_supertype(DataType::String, DataType::Boolean), DataType::Any);
}

TEST(DataTypeLattice, MatchesEnumerationOracle) {
    for (auto a : kAll) {
        for (auto b : kAll) {
            EXPECT_EQ(is_subtype(a, b), below(a, b));
            EXPECT_EQ(least_common_supertype(a, b), lub_oracle(a, b));
            EXPECT_EQ(least_common_supertype(a, b), least_common_supertype(b, a));
        }
    }
}

TEST(DataTypeLattice, Names) {
    for (auto t : kAll) {
        EXPECT_EQ(parse_datatype(to_string(t)), t);
        EXPECT_EQ(parse_datatype(to_lower_string(t)), t);
    }
    EXPECT_EQ(to_lower_string(DataType::Integer), "integer");
    EXPECT_FALSE(parse_datatype("STRNG"));
}

TEST(Cardinality, ToStringAndAdmits) {
    EXPECT_EQ(Cardinality::unbounded().to_string(), "0..*");
    EXPECT_EQ(Cardinality::exactly(1).to_string(), "1..1");
    EXPECT_TRUE(Cardinality::unbounded().admits(1000));
    EXPECT_FALSE((Cardinality{1, 3}).admits(0));
    EXPECT_FALSE((Cardinality{1, 3}).admits(4));
}

TEST(Canonicalize, Empty) { EXPECT_EQ(canonicalize(SchemaGraph{}), SchemaGraph{}); }

TEST(Canonicalize, SortsByDisplayName) {
    SchemaGraph s({{"n1", {"B"}, {{"z", DataType::String, true}, {"a", DataType::Any, false}}, {}},
                   {"n2", {"A"}, {}, {}}},
                  {});
    auto c = canonicalize(s);
    EXPECT_EQ(c.node_types()[0].display_name(), "A");
    EXPECT_EQ(c.node_types()[1].display_name(), "B");
    EXPECT_EQ(c.node_types()[1].properties[0].name, "a");
    EXPECT_EQ(c.node_types()[0].id, "n2");
}

TEST(Canonicalize, EdgesSortedByLabelThenEndpointNames) {
    auto s = pgschema::testing::schema_from(
        "NODE B {}\nNODE A {}\nEDGE (B)-[R]->(A)\nEDGE (A)-[R]->(B)\nEDGE (B)-[Q]->(B)");
    auto c = canonicalize(s);
    std::vector<std::string> keys;
    for (const auto& e : c.edge_types()) keys.push_back(c.key_of(e).to_string());
    EXPECT_EQ(keys, (std::vector<std::string>{"Q(B->B)", "R(A->B)", "R(B->A)"}));
}

TEST(Canonicalize, Idempotent) {
    Rng rng(21);
    for (int i = 0; i < 100; ++i) {
        auto c = canonicalize(pgschema::testing::random_schema(rng));
        EXPECT_EQ(canonicalize(c), c);
    }
}

TEST(SchemaEqual, Examples) {
    Rng rng(22);
    auto s = pgschema::testing::random_schema(rng);
    EXPECT_TRUE(schema_equal(s, s));

    SchemaGraph ab({{"n1", {"A"}, {}, {}}, {"n2", {"B"}, {}, {}}}, {});
    SchemaGraph ba({{"x9", {"B"}, {}, {}}, {"x3", {"A"}, {}, {}}}, {});
    EXPECT_TRUE(schema_equal(ab, ba));

    SchemaGraph req({{"n1", {"A"}, {{"k", DataType::String, true}}, {}}}, {});
    SchemaGraph opt({{"n1", {"A"}, {{"k", DataType::String, false}}, {}}}, {});
    EXPECT_FALSE(schema_equal(req, opt));
}

TEST(SchemaEqual, IgnoresIdsOfEdgesAndSupertypes) {
    SchemaGraph a({{"n1", {"A"}, {}, {}}, {"n2", {"B"}, {}, {"n1"}}},
                  {{"e1", {"R"}, "n1", "n2", {}, {}, {}}});
    SchemaGraph b({{"t7", {"B"}, {}, {"t3"}}, {"t3", {"A"}, {}, {}}},
                  {{"r", {"R"}, "t3", "t7", {}, {}, {}}});
    EXPECT_TRUE(schema_equal(a, b));
    SchemaGraph flipped({{"t7", {"B"}, {}, {"t3"}}, {"t3", {"A"}, {}, {}}},
                        {{"r", {"R"}, "t7", "t3", {}, {}, {}}});
    EXPECT_FALSE(schema_equal(a, flipped));
}

TEST(SchemaGraphIntegrity, RejectsInvalidConstructions) {
    using C = SchemaError::Code;
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {}}, {"n2", {"A"}, {}, {}}}, {}); }), C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {"n9"}}}, {}); }), C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {"n2"}}, {"n2", {"B"}, {}, {"n1"}}}, {}); }), C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {}}}, {{"e1", {"R"}, "n1", "n9", {}, {}, {}}}); }),
              C::Integrity);
    EXPECT_EQ(code_of([] {
                  SchemaGraph({{"n1", {"A"}, {}, {}}},
                              {{"e1", {"R"}, "n1", "n1", {}, {}, {}}, {"e2", {"R"}, "n1", "n1", {}, {}, {}}});
              }),
              C::Integrity);
    EXPECT_EQ(code_of([] {
                  SchemaGraph({{"n1", {"A"}, {{"k", DataType::Any, false}, {"k", DataType::Any, true}}, {}}}, {});
              }),
              C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"bad label"}, {}, {}}}, {}); }), C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {}}}, {{"e1", {"R"}, "n1", "n1", {}, {2, 1}, {}}}); }),
              C::Integrity);
    EXPECT_EQ(code_of([] { SchemaGraph({{"n1", {"A"}, {}, {}}}, {{"e1", {"R"}, "n1", "n1", {}, {0, 0}, {}}}); }),
              C::Integrity);
}

TEST(SchemaGraphLookup, FindsByNameKeyAndId) {
    auto s = pgschema::testing::schema_from("NODE Person {}\nNODE Company {}\nEDGE (Person)-[WORKS_AT]->(Company)");
    ASSERT_NE(s.find_node("Person"), nullptr);
    EXPECT_EQ(s.find_node(LabelSet{"Company"})->display_name(), "Company");
    auto* e = s.find_edge({"WORKS_AT", "Person", "Company"});
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(s.find_edge_by_id(e->id), e);
    EXPECT_EQ(s.key_of(*e).to_string(), "WORKS_AT(Person->Company)");
    EXPECT_EQ(s.find_node_by_id(s.fresh_node_id()), nullptr);
    EXPECT_EQ(s.find_edge_by_id(s.fresh_edge_id()), nullptr);
}

TEST(DisplayNames, ParseIsInverse) {
    EXPECT_EQ(parse_display_name("Employee&Person"), (LabelSet{"Employee", "Person"}));
    EXPECT_EQ(parse_display_name("_Unlabeled"), LabelSet{});
    EXPECT_FALSE(parse_display_name("a b"));
    EXPECT_FALSE(parse_display_name("A&&B"));
    EXPECT_TRUE(is_identifier("_x9"));
    EXPECT_FALSE(is_identifier("9x"));
}
