#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "pgschema/conformance.hpp"
#include "pgschema/extractor.hpp"

namespace {

pgschema::PropertyGraph graph_of(std::int64_t nodes) {
    pgschema::testing::Rng rng(7);
    std::size_t n = static_cast<std::size_t>(nodes);
    return pgschema::testing::random_graph(rng, {.max_nodes = n, .max_edges = 2 * n});
}

void BM_Extract(benchmark::State& state) {
    auto g = graph_of(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::extract_schema(g));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.nodes().size() + g.edges().size()));
}
BENCHMARK(BM_Extract)->Range(64, 16384);

void BM_Validate(benchmark::State& state) {
    auto g = graph_of(state.range(0));
    auto s = pgschema::extract_schema(g);
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::validate_conformance(g, s));
}
BENCHMARK(BM_Validate)->Range(64, 16384);

void BM_LoadGraph(benchmark::State& state) {
    auto text = pgschema::dump_graph(graph_of(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::load_graph_text(text));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_LoadGraph)->Range(64, 16384);

}  // namespace
