#include <benchmark/benchmark.h>

#include "fml/content.hpp"
#include "fml/harness.hpp"
#include "fml/random.hpp"

namespace {

fml::IteratedFunctionSystem quaternary() {
  const double r[] = {1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  return fml::IteratedFunctionSystem::symbolic(r, {0.1, 0.2, 0.3, 0.4});
}

// n random words of exactly the given depth.
fml::CellSet deep_cells(std::size_t n, int depth, std::uint64_t seed) {
  fml::SplitMix64 rng(seed);
  std::vector<fml::Word> words;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<fml::Word::Symbol> s(static_cast<std::size_t>(depth));
    for (auto& x : s) x = static_cast<fml::Word::Symbol>(rng.below(4));
    words.emplace_back(std::move(s));
  }
  return fml::disjointify(words, 4);
}

void BM_ContentDp(benchmark::State& state) {
  const auto ifs = quaternary();
  const auto cells = deep_cells(static_cast<std::size_t>(state.range(0)), 8, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fml::hausdorff_content(ifs, cells, fml::ContentExponent(0.5)));
  }
  state.counters["cells"] = static_cast<double>(cells.size());
}
BENCHMARK(BM_ContentDp)->RangeMultiplier(4)->Range(16, 4096);

void BM_SuperlevelSweep(benchmark::State& state) {
  const auto ifs = quaternary();
  const int depth = static_cast<int>(state.range(0));
  const auto f = fml::generate_function(4, fml::GeneratorConfig{depth, fml::ValueDistribution::uniform, 1.0, 3});
  for (auto _ : state) {
    benchmark::DoNotOptimize(fml::superlevel_contents(ifs, depth, f.values(), fml::ContentExponent(0.5)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.leaf_count()));
}
BENCHMARK(BM_SuperlevelSweep)->DenseRange(3, 6);

void BM_BruteForceContent(benchmark::State& state) {
  const auto ifs = quaternary();
  const auto cells = deep_cells(6, 3, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fml::brute_force_content(ifs, cells, fml::ContentExponent(0.5), 4));
  }
  state.counters["covers"] = static_cast<double>(fml::count_covers(cells, 4, 4));
}
BENCHMARK(BM_BruteForceContent);

}  // namespace
