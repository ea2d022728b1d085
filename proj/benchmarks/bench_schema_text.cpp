#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "pgschema/schema_text.hpp"

namespace {

pgschema::SchemaGraph big_schema() {
    pgschema::testing::Rng rng(3);
    return pgschema::testing::random_schema(rng, {.max_node_types = 40, .max_edge_types = 80, .max_properties = 8});
}

void BM_Serialize(benchmark::State& state) {
    auto s = big_schema();
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::serialize_schema(s));
}
BENCHMARK(BM_Serialize);

void BM_Parse(benchmark::State& state) {
    auto text = pgschema::serialize_schema(big_schema()).text;
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::parse_schema(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Parse);

}  // namespace
