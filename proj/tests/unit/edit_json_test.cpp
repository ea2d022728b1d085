#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pgschema/edit_json.hpp"
#include "pgschema/error.hpp"
#include "pgschema/refine.hpp"

using namespace pgschema;
using nlohmann::json;

TEST(EditJson, SplitCommand) {
    auto e = edit_from_json(
        json::parse(R"({"op":"split","type":"Person","discriminator":"parkingSpot","with":"Employee","without":"Guest"})"));
    const auto* split = std::get_if<edit::SplitNodeType>(&e);
    ASSERT_NE(split, nullptr);
    EXPECT_EQ(split->type, "Person");
    EXPECT_EQ(split->discriminator, "parkingSpot");
    EXPECT_EQ(split->with_labels, LabelSet{"Employee"});
    EXPECT_EQ(split->without_labels, LabelSet{"Guest"});
}

TEST(EditJson, EdgeReferenceForms) {
    auto by_key = edit_from_json(json::parse(R"({"op":"flip-edge","edge":{"label":"R","src":"A","dst":"B"}})"));
    auto ref = std::get<edit::FlipEdgeDirection>(std::get<BasicEdit>(by_key)).edge;
    EXPECT_EQ(ref, EdgeRef::by_key({"R", "A", "B"}));
    auto by_id = edit_from_json(json::parse(R"({"op":"flip-edge","edge":"e3"})"));
    EXPECT_EQ(std::get<edit::FlipEdgeDirection>(std::get<BasicEdit>(by_id)).edge, EdgeRef::by_id("e3"));
}

TEST(EditJson, LabelsAsArrayOrName) {
    auto a = edit_from_json(json::parse(R"({"op":"add-node","labels":["Person","Employee"]})"));
    auto b = edit_from_json(json::parse(R"({"op":"add-node","labels":"Employee&Person"})"));
    EXPECT_EQ(std::get<edit::AddNodeType>(std::get<BasicEdit>(a)).labels,
              std::get<edit::AddNodeType>(std::get<BasicEdit>(b)).labels);
}

TEST(EditJson, EveryOpRoundTrips) {
    const char* commands[] = {
        R"({"op":"add-node","labels":"Employee"})",
        R"({"op":"remove-node","type":"Person"})",
        R"({"op":"add-edge","label":"KNOWS","src":"Person","dst":"Person"})",
        R"({"op":"remove-edge","edge":{"label":"KNOWS","src":"Person","dst":"Person"}})",
        R"({"op":"add-property","owner":"Person","name":"age","datatype":"INTEGER","required":false})",
        R"({"op":"remove-property","owner":{"label":"R","src":"A","dst":"B"},"key":"w"})",
        R"({"op":"set-property-type","owner":"Person","key":"age","datatype":"FLOAT"})",
        R"({"op":"set-property-required","owner":"Person","key":"age","required":true})",
        R"({"op":"flip-edge","edge":"e1"})",
        R"({"op":"set-cardinality","edge":"e1","outCard":[1,1],"inCard":[0,null]})",
        R"({"op":"set-supertype","type":"Employee","supertype":"Person"})",
        R"({"op":"set-supertype","type":"Employee","supertype":null})",
        R"({"op":"rename","type":"Person","to":"Human"})",
        R"({"op":"merge-union","a":"Employee","b":"Guest","into":"Person"})",
        R"({"op":"merge-intersection","types":["Employee","Guest"],"into":"Person"})",
        R"({"op":"split","type":"Person","discriminator":"parkingSpot","with":"Employee","without":"Guest"})",
        R"({"op":"duplicate","type":"Person","as":"Human"})",
        R"({"op":"duplicate","type":{"label":"R","src":"A","dst":"B"},"as":"S"})",
        R"({"op":"escalate","type":"Person","key":"city","node":"City","edge":"LIVES_IN"})",
    };
    for (const char* c : commands) {
        auto first = edit_to_json(edit_from_json(json::parse(c)));
        auto second = edit_to_json(edit_from_json(first));
        EXPECT_EQ(first, second) << c;
        EXPECT_EQ(first.at("op"), json::parse(c).at("op")) << c;
    }
}

TEST(EditJson, MalformedCommands) {
    const char* commands[] = {
        R"({"type":"Person"})",
        R"({"op":"explode"})",
        R"({"op":"remove-node"})",
        R"({"op":"remove-node","type":7})",
        R"({"op":"add-property","owner":"Person","name":"x","datatype":"STRNG"})",
        R"({"op":"add-node","labels":"a b"})",
        R"({"op":"set-cardinality","edge":"e1","outCard":[1],"inCard":[0,null]})",
        R"([1,2])",
    };
    for (const char* c : commands) {
        try {
            edit_from_json(json::parse(c));
            ADD_FAILURE() << c;
        } catch (const SchemaError& e) {
            EXPECT_EQ(e.code(), SchemaError::Code::Precondition) << c;
            EXPECT_NE(std::string(e.what()).find("invalid edit command"), std::string::npos);
        }
    }
}

TEST(EditJson, AppliesToSchema) {
    auto s = pgschema::testing::schema_from("NODE Person { name: STRING, parkingSpot: STRING? }");
    auto out = apply_edit(s, edit_from_json(json::parse(
                                 R"({"op":"split","type":"Person","discriminator":"parkingSpot","with":"Employee","without":"Guest"})")));
    EXPECT_NE(out.find_node("Employee"), nullptr);
    EXPECT_NE(out.find_node("Guest"), nullptr);
}
