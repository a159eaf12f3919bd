#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <memory>

#include "doctest.h"
#include "fever_forge/baseline.hpp"
#include "fever_forge/error.hpp"
#include "fever_forge/rules.hpp"
#include "fever_forge/scorer.hpp"
#include "fever_forge/tfidf.hpp"
#include "support.hpp"

using namespace fever_forge;
using namespace fever_forge::testing;

namespace {

std::shared_ptr<const WikiSnapshot> wiki3() {
  return std::make_shared<const WikiSnapshot>(load_wiki_snapshot(test_data("wiki3.jsonl")));
}

WikiSnapshot tiny() {
  WikiSnapshot s;
  s.add_page("Alpha", {"red green", "blue"});
  s.add_page("Beta", {"red red"});
  return s;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("Bullitt is a 1968 film!") ==
        std::vector<std::string>{"bullitt", "is", "a", "1968", "film"});
  CHECK(tokenize("D'Antoni's") == std::vector<std::string>{"d", "antoni", "s"});
  CHECK(tokenize("Caf\xC3\xA9 crème") == std::vector<std::string>{"caf\xC3\xA9", "cr\xC3\xA8me"});
  CHECK(tokenize("  ").empty());
}

TEST_CASE("build_index granularity") {
  const auto snapshot = wiki3();
  const auto docs = build_index(*snapshot, Granularity::kDocument);
  CHECK(docs.size() == 3);
  for (const auto& e : docs.entries()) CHECK(e.line == -1);
  const auto sentences = build_index(*snapshot, Granularity::kSentence);
  CHECK(sentences.size() == 12);

  WikiSnapshot four;
  four.add_page("Four", {"one", "two", "three", "four"});
  const auto idx = build_index(four, Granularity::kSentence);
  REQUIRE(idx.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(idx.sentence_id(i) == sid("Four", i));

  CHECK_THROWS_AS(build_index(WikiSnapshot{}, Granularity::kDocument), Error);
}

TEST_CASE("tf-idf weights by hand") {
  // Documents: Alpha = {red, green, blue}, Beta = {red, red}. D = 2.
  // idf(red) = ln(3/3) + 1 = 1, idf(green) = idf(blue) = ln(3/2) + 1.
  const auto idx = build_index(tiny(), Granularity::kDocument);
  const double rare = std::log(1.5) + 1.0;
  CHECK(idx.idf("red") == doctest::Approx(1.0));
  CHECK(idx.idf("green") == doctest::Approx(rare));
  CHECK(idx.vocabulary_size() == 3);
  // Query "red": Alpha cos = 1 / sqrt(1 + 2 rare^2), Beta cos = 1.
  const auto hits = retrieve(idx, "red", 5);
  REQUIRE(hits.size() == 2);
  CHECK(idx.entry(hits[0].entry).page == "Beta");
  CHECK(hits[0].score == doctest::Approx(1.0));
  CHECK(hits[1].score == doctest::Approx(1.0 / std::sqrt(1.0 + 2.0 * rare * rare)));
}

TEST_CASE("retrieve") {
  const auto snapshot = wiki3();
  const auto docs = build_index(*snapshot, Granularity::kDocument);
  SUBCASE("Bullitt page first") {
    const auto hits = retrieve(docs, "Bullitt is a movie", 3);
    REQUIRE_FALSE(hits.empty());
    CHECK(docs.entry(hits[0].entry).page == "Bullitt");
  }
  SUBCASE("no shared vocabulary gives zeros in tie-break order") {
    const auto hits = retrieve(docs, "zzz qqq", 3);
    REQUIRE(hits.size() == 3);
    CHECK(docs.entry(hits[0].entry).page == "Bullitt");
    CHECK(docs.entry(hits[1].entry).page == "Downton_Abbey");
    CHECK(docs.entry(hits[2].entry).page == "Lily_James");
    for (const auto& h : hits) CHECK(h.score == 0.0);
  }
  SUBCASE("k larger than the index") {
    CHECK(retrieve(docs, "film", 50).size() == 3);
    CHECK_THROWS_AS(retrieve(docs, "film", 0), Error);
  }
  SUBCASE("a stored sentence retrieves itself first") {
    const auto sentences = build_index(*snapshot, Granularity::kSentence);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto id = sentences.sentence_id(i);
      const auto hits = retrieve(sentences, snapshot->lookup(id), 1);
      REQUIRE(hits.size() == 1);
      CHECK(sentences.sentence_id(hits[0].entry) == id);
      CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("determinism, self-similarity and score range") {
    const auto sentences = build_index(*snapshot, Granularity::kSentence);
    const auto a = retrieve(sentences, "Lily James starred in Downton Abbey", 12);
    const auto b = retrieve(sentences, "Lily James starred in Downton Abbey", 12);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].entry == b[i].entry);
      CHECK(a[i].score == b[i].score);
      CHECK(a[i].score >= 0.0);
      CHECK(a[i].score <= 1.0);
    }
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& v = sentences.vector_of(i);
      if (!v.empty()) CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("nearest page sentences for NOT ENOUGH INFO claims") {
  WikiSnapshot s;
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("Glacier fact number " + std::to_string(i) + ".");
  s.add_page("Glacier", ten);
  s.add_page("Short", {"Harbor one.", "Harbor two.", "Harbor three."});
  const auto docs = build_index(s, Granularity::kDocument);

  const auto exact = nearest_page_nei_evidence(docs, "harbor", 3, 0);
  CHECK(exact == std::vector{sid("Short", 0), sid("Short", 1), sid("Short", 2)});

  const auto a = nearest_page_nei_evidence(docs, "a glacier question", 3, 1);
  const auto b = nearest_page_nei_evidence(docs, "a glacier question", 3, 1);
  REQUIRE(a.size() == 3);
  CHECK(a == b);
  std::set<int> lines;
  for (const auto& id : a) {
    CHECK(id.page == "Glacier");
    lines.insert(id.line);
  }
  CHECK(lines.size() == 3);
  CHECK(std::is_sorted(a.begin(), a.end()));
}

TEST_CASE("heuristic verdict") {
  const std::string evidence = "Bullitt is a 1968 film directed by Peter Yates.";
  CHECK(heuristic_verdict(evidence, {evidence}).label == Label::kSupported);
  CHECK(heuristic_verdict(evidence, {evidence}).confidence == doctest::Approx(1.0));
  CHECK(heuristic_verdict("Bullitt is not a 1968 film directed by Peter Yates.", {evidence}).label ==
        Label::kRefuted);
  CHECK(heuristic_verdict("Bullitt wasn't a 1968 film directed by Peter Yates.", {evidence}).label ==
        Label::kRefuted);
  CHECK(heuristic_verdict("Penguins enjoy cold water.", {evidence}).label == Label::kNotEnoughInfo);
  CHECK(heuristic_verdict("Anything.", {}).label == Label::kNotEnoughInfo);
  CHECK(heuristic_verdict("Aldershot is not a city.", {"Aldershot is not a city."}).label ==
        Label::kSupported);

  CHECK(count_negation_cues("It is not true, he never didn't, no way, isn't it") == 5);
  CHECK(count_negation_cues("Nothing notable knows") == 0);
  CHECK(content_tokens("Bullitt isn't a film") == std::vector<std::string>{"bullitt", "a", "film"});
  CHECK(jaccard({"a", "b"}, {"b", "c"}) == doctest::Approx(1.0 / 3.0));
  CHECK(jaccard({}, {}) == 0.0);
}

TEST_CASE("pipeline in oracle mode") {
  const auto snapshot = wiki3();
  auto pipeline = std::make_shared<const BaselinePipeline>(snapshot);
  const Instance same{"same", snapshot->lookup(sid("Lily_James", 2)), Label::kSupported,
                      {{{sid("Lily_James", 2)}}}};
  const auto preds = run_pipeline(SystemAdapter::baseline("b", pipeline), {same}, PipelineMode::kOracle);
  REQUIRE(preds.size() == 1);
  CHECK(preds[0].pred.predicted_label == Label::kSupported);
  CHECK(preds[0].pred.predicted_evidence == same.evidence[0].sentences);
  CHECK(instance_correct(preds[0]));

  const Instance missing{"gap", "x", Label::kSupported, {{{sid("Bullitt", 40)}}}};
  CHECK_THROWS_AS(pipeline->predict({missing}, PipelineMode::kOracle), Error);

  const Instance nei{"nei", "Downton Abbey was filmed at a castle.", Label::kNotEnoughInfo, {}};
  const auto nei_pred = pipeline->predict({nei}, PipelineMode::kOracle);
  REQUIRE(nei_pred.size() == 1);
  CHECK_FALSE(nei_pred[0].predicted_evidence.empty());
  for (const auto& id : nei_pred[0].predicted_evidence) CHECK(id.page == "Downton_Abbey");

  // Oracle FEVER equals oracle accuracy because evidence is the first gold set.
  const auto dataset = load_dataset(test_data("wiki3_dataset.jsonl"));
  const auto all = run_pipeline(SystemAdapter::baseline("b", pipeline), dataset, PipelineMode::kOracle);
  const auto report = fever_score(all);
  CHECK(report.fever_score == report.label_accuracy);
}

TEST_CASE("pipeline in retrieved mode") {
  SUBCASE("no overlap gives NOT ENOUGH INFO everywhere") {
    auto pipeline = std::make_shared<const BaselinePipeline>(wiki3());
    const std::vector<Instance> strangers{
        {"1", "Penguins enjoy cold water.", Label::kSupported, {{{sid("Bullitt", 0)}}}},
        {"2", "Quantum foam bubbles.", Label::kRefuted, {{{sid("Bullitt", 1)}}}}};
    for (const auto& p : pipeline->predict(strangers, PipelineMode::kRetrieved)) {
      CHECK(p.predicted_label == Label::kNotEnoughInfo);
      CHECK(p.predicted_evidence.size() <= 5);
    }
  }
  SUBCASE("negations flip the verdict of verbatim claims and cost accuracy") {
    auto snapshot = std::make_shared<const WikiSnapshot>(
        load_wiki_snapshot(shipped_data("fixtures/wiki.jsonl")));
    auto pipeline = std::make_shared<const BaselinePipeline>(snapshot);
    const auto corpus = load_dataset(shipped_data("fixtures/corpus.jsonl"));
    const std::vector<Instance> sources(corpus.begin(), corpus.begin() + 20);

    const RuleSet rules = parse_ruleset(shipped_data("rules/default_rules.jsonl"));
    const auto generated = generate_adversarial_dataset(rules, sources).generated;
    std::vector<Instance> negated;
    std::map<std::string, const GeneratedInstance*> by_id;
    for (const auto& g : generated) {
      if (!is_negation(g.cls)) continue;
      negated.push_back(g.instance);
      by_id[g.instance.id] = &g;
    }
    REQUIRE(negated.size() >= 20);

    const auto adapter = SystemAdapter::baseline("b", pipeline);
    const auto before = run_pipeline(adapter, sources, PipelineMode::kRetrieved);
    const auto after = run_pipeline(adapter, negated, PipelineMode::kRetrieved);
    std::map<std::string, Label> source_verdict;
    for (const auto& lp : before) {
      CHECK(lp.pred.predicted_label == Label::kSupported);
      source_verdict[lp.gold.id] = lp.pred.predicted_label;
    }
    std::size_t flipped = 0;
    for (const auto& lp : after) {
      const auto* g = by_id.at(lp.gold.id);
      if (g->cls == TransformationClass::kSimpleNegation &&
          lp.pred.predicted_label == Label::kRefuted &&
          source_verdict.at(g->source_id) == Label::kSupported) {
        ++flipped;
      }
    }
    CHECK(flipped > 0);
    CHECK(fever_score(after).label_accuracy < fever_score(before).label_accuracy);
  }
}

TEST_CASE("system adapters") {
  const std::vector<Instance> instances{
      {"a", "x", Label::kNotEnoughInfo, {}}, {"b", "y", Label::kNotEnoughInfo, {}}};
  const auto adapter = SystemAdapter::from_predictions(
      "fixed", {{"b", Label::kRefuted, {}}, {"a", Label::kSupported, {}}, {"z", Label::kSupported, {}}});
  CHECK(adapter.name() == "fixed");
  const auto preds = adapter.predict(instances, PipelineMode::kOracle);
  REQUIRE(preds.size() == 2);
  CHECK(preds[0].instance_id == "a");
  CHECK(preds[1].predicted_label == Label::kRefuted);

  const auto partial = SystemAdapter::from_predictions("partial", {{"a", Label::kSupported, {}}});
  CHECK_THROWS_AS(partial.predict(instances, PipelineMode::kOracle), Error);

  TempDir dir("adapter");
  write_text(dir / "p.jsonl",
             R"j({"id": "a", "predicted_label": "SUPPORTS", "predicted_evidence": []})j" "\n"
             R"j({"id": "b", "predicted_label": "NOT ENOUGH INFO", "predicted_evidence": []})j" "\n");
  const auto file = SystemAdapter::from_file("file", dir / "p.jsonl");
  CHECK(run_pipeline(file, instances, PipelineMode::kRetrieved).size() == 2);
}
