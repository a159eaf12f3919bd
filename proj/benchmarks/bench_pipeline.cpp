#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "fever_forge/baseline.hpp"
#include "fever_forge/corpus.hpp"
#include "fever_forge/rules.hpp"
#include "fever_forge/scorer.hpp"
#include "fever_forge/tfidf.hpp"
#include "fever_forge/tournament.hpp"

using namespace fever_forge;

namespace {

std::string shipped(const std::string& name) {
  return std::string(FEVER_FORGE_SHIPPED_DATA) + "/" + name;
}

const RuleSet& default_rules() {
  static const RuleSet rules = parse_ruleset(shipped("rules/default_rules.jsonl"));
  return rules;
}

const std::vector<Instance>& corpus() {
  static const std::vector<Instance> instances = load_dataset(shipped("fixtures/corpus.jsonl"));
  return instances;
}

std::shared_ptr<const WikiSnapshot> snapshot() {
  static const auto wiki =
      std::make_shared<const WikiSnapshot>(load_wiki_snapshot(shipped("fixtures/wiki.jsonl")));
  return wiki;
}

const std::vector<GeneratedInstance>& generated() {
  static const auto out = generate_adversarial_dataset(default_rules(), corpus()).generated;
  return out;
}

void BM_GenerateCorpus(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_adversarial_dataset(default_rules(), corpus()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(corpus().size()));
}
BENCHMARK(BM_GenerateCorpus);

// Perfect predictions over N copies of the generated set.
void BM_FeverScore(benchmark::State& state) {
  std::vector<LabeledPrediction> preds;
  const auto& gen = generated();
  while (preds.size() < static_cast<std::size_t>(state.range(0))) {
    for (const auto& g : gen) {
      Prediction p{g.instance.id, g.instance.label, {}};
      if (!g.instance.evidence.empty()) p.predicted_evidence = g.instance.evidence[0].sentences;
      preds.push_back({g.instance, p});
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(fever_score(preds));
    benchmark::DoNotOptimize(evidence_prf(preds));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(preds.size()));
}
BENCHMARK(BM_FeverScore)->Arg(1000)->Arg(100000);

void BM_BuildSentenceIndex(benchmark::State& state) {
  const auto wiki = snapshot();
  for (auto _ : state) benchmark::DoNotOptimize(build_index(*wiki, Granularity::kSentence));
}
BENCHMARK(BM_BuildSentenceIndex);

void BM_Retrieve(benchmark::State& state) {
  const auto index = build_index(*snapshot(), Granularity::kSentence);
  const std::string claim = "Bullitt is a movie directed by Peter Yates";
  for (auto _ : state) benchmark::DoNotOptimize(retrieve(index, claim, 5));
}
BENCHMARK(BM_Retrieve);

void BM_RetrievedPipeline(benchmark::State& state) {
  const BaselinePipeline pipeline(snapshot());
  const auto& instances = corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline.predict(instances, PipelineMode::kRetrieved));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(instances.size()));
}
BENCHMARK(BM_RetrievedPipeline);

void BM_BalanceAndSample(benchmark::State& state) {
  std::vector<GeneratedInstance> pool;
  const auto& gen = generated();
  for (int copy = 0; pool.size() < 10000; ++copy) {
    for (auto g : gen) {
      g.instance.id += "/" + std::to_string(copy);
      pool.push_back(std::move(g));
    }
  }
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto balanced = balance_classes(pool, seed);
    benchmark::DoNotOptimize(stratified_sample(balanced, balanced.size() / 2, seed++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pool.size()));
}
BENCHMARK(BM_BalanceAndSample);

}  // namespace
