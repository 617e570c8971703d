#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "event_distill/binning.hpp"
#include "event_distill/clustering.hpp"
#include "event_distill/compress.hpp"
#include "event_distill/embedding.hpp"
#include "event_distill/evbin.hpp"
#include "event_distill/filter.hpp"
#include "event_distill/hashing.hpp"
#include "event_distill/synthetic.hpp"

namespace ed = event_distill;

namespace {

ed::EventStream noise_stream(std::uint64_t events) {
  const auto spec = ed::parse_scene(
      "static-noise:" + std::to_string(events) + ":1000000", {640, 480});
  return ed::generate_synthetic(spec, 1);
}

std::vector<ed::FeatureVector> random_vectors(std::size_t n, std::size_t dim,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> normal;
  std::vector<ed::FeatureVector> out(n, ed::FeatureVector::zeros(dim));
  for (auto& v : out) {
    for (auto& x : v.values) x = normal(rng);
  }
  return out;
}

void BM_HashBytes(benchmark::State& state) {
  std::vector<std::byte> bytes(static_cast<std::size_t>(state.range(0)), std::byte{0x5a});
  for (auto _ : state) benchmark::DoNotOptimize(ed::hash_bytes(bytes));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HashBytes)->Range(64, 1 << 20);

void BM_EvbinParse(benchmark::State& state) {
  const auto stream = noise_stream(static_cast<std::uint64_t>(state.range(0)));
  std::ostringstream out;
  ed::write_evbin(stream, out);
  const auto bytes = out.str();
  for (auto _ : state) {
    std::istringstream in(bytes);
    benchmark::DoNotOptimize(ed::parse_evbin(in));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvbinParse)->Arg(100'000)->Arg(1'000'000);

void BM_BinStream(benchmark::State& state) {
  const auto stream = noise_stream(1'000'000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ed::bin_stream(stream, static_cast<std::uint64_t>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_BinStream)->Arg(1'000)->Arg(100'000);

void BM_HashEmbedBins(benchmark::State& state) {
  const auto stream = noise_stream(1'000'000);
  const auto bins = ed::bin_stream(stream, 10'000);
  ed::HashProvider provider({static_cast<std::size_t>(state.range(0)), 0});
  for (auto _ : state) benchmark::DoNotOptimize(provider.embed_bins(bins));
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_HashEmbedBins)->Arg(64)->Arg(512);

void BM_Hac(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vectors(n, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ed::hac_average_linkage(x, 1));
}
BENCHMARK(BM_Hac)->Arg(8)->Arg(32)->Arg(128);

void BM_CompressSequence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vectors(n, 64, 4);
  ed::CompressionConfig config;
  config.tau = -1.0;
  const auto filtered = ed::cross_modal_filter(x, x, x.front(), config);
  for (auto _ : state) benchmark::DoNotOptimize(ed::compress_sequence(filtered, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompressSequence)->Arg(1'000)->Arg(10'000);

}  // namespace

BENCHMARK_MAIN();
