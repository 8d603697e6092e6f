#include <random>

#include <benchmark/benchmark.h>

#include "ordersum/candidates.hpp"
#include "ordersum/embedder.hpp"
#include "ordersum/model.hpp"
#include "ordersum/rouge.hpp"
#include "ordersum/synthetic.hpp"

namespace {

using namespace ordersum;

TokenSequence random_tokens(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> word(0, 49);
  TokenSequence out(n);
  for (auto& t : out) t = "w" + std::to_string(word(rng));
  return out;
}

void BM_Lcs(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const TokenSequence a = random_tokens(rng, n), b = random_tokens(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(lcs_length(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Lcs)->RangeMultiplier(2)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_RougeReport(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<TokenSequence> reference, candidate;
  for (int i = 0; i < 4; ++i) reference.push_back(random_tokens(rng, 20));
  for (int i = 0; i < 3; ++i) candidate.push_back(random_tokens(rng, 25));
  for (auto _ : state) benchmark::DoNotOptimize(rouge_report(reference, candidate));
}
BENCHMARK(BM_RougeReport);

void BM_Generate(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::vector<std::size_t> key(k);
  for (std::size_t i = 0; i < k; ++i) key[i] = i;
  const CandidateConfig config{k, {k - 2, k - 1}, CandidateMode::kPermutation};
  for (auto _ : state) benchmark::DoNotOptimize(generate(config, key));
}
BENCHMARK(BM_Generate)->DenseRange(5, 8);

void BM_EmbedCandidate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const std::size_t d = 768;
  std::vector<Vector> sentences(8, Vector(d));
  for (auto& v : sentences) {
    for (auto& x : v) x = normal(rng);
  }
  const CandidateSummary candidate = make_candidate({4, 0, 6, 2, 7, 1});
  for (auto _ : state) benchmark::DoNotOptimize(embed_candidate(sentences, candidate));
}
BENCHMARK(BM_EmbedCandidate);

void BM_Grad(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  SyntheticConfig config;
  config.documents = 8;
  const DatasetSplit split = make_synthetic_corpus(config);
  const EmbeddingMap embeddings = toy_embed_all(split, d, 1);
  const RerankerModel model = RerankerModel::initialize(d, 1, 0.1);
  const auto all = generate({4, {2, 3}, CandidateMode::kPermutation}, std::vector<std::size_t>{0, 1, 2, 3});
  std::vector<TrainExample> batch;
  for (const auto& doc : split.documents) {
    std::vector<int> labels(doc.size(), 0);
    labels[0] = 1;
    batch.push_back({&embeddings.at(doc.id), labels, anchor_sample(all, 2, 5)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(grad(model, batch));
}
BENCHMARK(BM_Grad)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
