#include <benchmark/benchmark.h>

#include <random>

#include "pfe/decision.hpp"
#include "pfe/evaluate.hpp"
#include "pfe/oracle.hpp"
#include "pfe/scoring.hpp"
#include "pfe/synth.hpp"

namespace {

pfe::ProbabilisticEmbedding random_embedding(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 0.05);
  std::vector<double> mean(d), sigma(d);
  for (auto& v : mean) v = normal(rng);
  for (auto& v : sigma) v = uniform(rng);
  return pfe::validate_embedding(pfe::FeatureVector(std::move(mean)),
                                 pfe::FeatureVector(std::move(sigma)), "x", "s");
}

void BM_ScoreUncertainty(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto x = random_embedding(rng, d);
  const auto y = random_embedding(rng, d);
  for (auto _ : state) benchmark::DoNotOptimize(pfe::score_uncertainty(x, y));
}
BENCHMARK(BM_ScoreUncertainty)->Arg(128)->Arg(512);

void BM_DecisionConfidence(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto x = random_embedding(rng, 512);
  const auto y = random_embedding(rng, 512);
  const pfe::ConfidenceParams params(5.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(pfe::decision_confidence(x, y, params));
}
BENCHMARK(BM_DecisionConfidence);

void BM_Assess(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto x = random_embedding(rng, 512);
  const auto y = random_embedding(rng, 512);
  const pfe::ConfidenceParams params(5.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(pfe::assess(x, y, params));
}
BENCHMARK(BM_Assess);

void BM_Erc(benchmark::State& state) {
  pfe::SynthConfig cfg;
  cfg.n_subjects = 200;
  cfg.dimension = 128;
  const auto set = pfe::generate(cfg).embeddings;
  const pfe::EvalConfig ecfg;
  const auto pairs = pfe::build_pairs(set, ecfg);
  const pfe::EmbeddingIndex index(set);
  const auto calib = pfe::calibrate_threshold(pfe::score_pairs(index, pairs), ecfg.fmr_target);
  const auto results = pfe::assess_pairs(index, pairs, pfe::ConfidenceParams(5.0, calib.threshold));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pfe::erc(results, pfe::RejectionKey::DecisionConfidence, ecfg, calib));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(results.size()));
}
BENCHMARK(BM_Erc)->Unit(benchmark::kMillisecond);

void BM_OracleScoreStd(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto x = random_embedding(rng, 128);
  const auto y = random_embedding(rng, 128);
  for (auto _ : state) benchmark::DoNotOptimize(pfe::oracle::mc_score_std(x, y, 10000, 1));
}
BENCHMARK(BM_OracleScoreStd)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
