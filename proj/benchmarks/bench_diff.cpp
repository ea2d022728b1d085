#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "pgschema/diff.hpp"

namespace {

void BM_ComputeDiff(benchmark::State& state) {
    pgschema::testing::Rng rng(5);
    auto a = pgschema::testing::random_schema(rng, {.max_node_types = 40, .max_edge_types = 80, .max_properties = 8});
    auto b = pgschema::testing::mutate(a, rng, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::compute_diff(a, b));
}
BENCHMARK(BM_ComputeDiff)->Arg(1)->Arg(10)->Arg(50);

void BM_ApplyDiff(benchmark::State& state) {
    pgschema::testing::Rng rng(6);
    auto a = pgschema::testing::random_schema(rng, {.max_node_types = 40, .max_edge_types = 80, .max_properties = 8});
    auto b = pgschema::testing::mutate(a, rng, static_cast<std::size_t>(state.range(0)));
    auto d = pgschema::compute_diff(a, b);
    for (auto _ : state) benchmark::DoNotOptimize(pgschema::apply_diff(a, d));
}
BENCHMARK(BM_ApplyDiff)->Arg(1)->Arg(10)->Arg(50);

}  // namespace
