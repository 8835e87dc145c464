// Serial reference vs OpenMP kernel over a generated batch of files.

#include "qualex/batch.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

std::vector<qualex::SourceFile> make_batch(std::size_t files) {
    std::mt19937 rng(7);
    std::vector<qualex::SourceFile> batch;
    for (std::size_t i = 0; i < files; ++i) {
        std::string text;
        for (int f = 0; f < 20; ++f) {
            text += "int f" + std::to_string(f) + "(int x, int y) {\n  int s = 0;\n";
            const int branches = 1 + static_cast<int>(rng() % 12);
            for (int k = 0; k < branches; ++k) {
                text += "  if (x > " + std::to_string(k) + " && y != s) s += x * " + std::to_string(k) + ";\n";
                text += "  for (int i = 0; i < y; ++i) s = s ^ g(i, s);\n";
            }
            text += "  return s;\n}\n";
        }
        batch.push_back({"src/f" + std::to_string(i) + ".c", std::move(text)});
    }
    return batch;
}

void BM_Serial(benchmark::State& state) {
    const auto batch = make_batch(static_cast<std::size_t>(state.range(0)));
    const auto& profile = qualex::find_profile("c-family");
    for (auto _ : state) benchmark::DoNotOptimize(qualex::analyze_batch_serial(batch, profile));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Parallel(benchmark::State& state) {
    const auto batch = make_batch(static_cast<std::size_t>(state.range(0)));
    const auto& profile = qualex::find_profile("c-family");
    for (auto _ : state) benchmark::DoNotOptimize(qualex::analyze_batch_parallel(batch, profile));
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = qualex::analysis_threads();
}

} // namespace

BENCHMARK(BM_Serial)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
