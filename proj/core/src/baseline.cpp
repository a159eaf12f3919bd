#include "fever_forge/baseline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fever_forge/error.hpp"
#include "fever_forge/random.hpp"

namespace fever_forge {

namespace {

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

// Whitespace words, lowercased, with surrounding punctuation other than
// apostrophes removed.
std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) {
    auto keep = [](unsigned char c) {
      return std::isalnum(c) != 0 || c == '\'' || c >= 0x80;
    };
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && !keep(static_cast<unsigned char>(word[begin]))) ++begin;
    while (end > begin && !keep(static_cast<unsigned char>(word[end - 1]))) --end;
    if (begin == end) continue;
    std::string w = word.substr(begin, end - begin);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    out.push_back(std::move(w));
  }
  return out;
}

bool is_cue(std::string_view word) {
  static const std::unordered_set<std::string_view> kCues = {
      "not", "n't", "never", "no", "outside", "wasn't", "isn't"};
  return kCues.count(word) != 0 || ends_with(word, "n't");
}

}  // namespace

std::vector<EvidenceSentenceId> nearest_page_nei_evidence(
    const TfidfIndex& doc_index, std::string_view claim, std::size_t m,
    std::uint64_t seed) {
  if (doc_index.granularity() != Granularity::kDocument) {
    throw Error("NearestP sampling needs a document-granular index");
  }
  if (doc_index.size() == 0) throw Error("NearestP sampling on an empty index");
  if (m == 0) throw Error("NearestP sample size must be at least 1");
  const auto hits = doc_index.retrieve(claim, 1);
  const auto& page = doc_index.entry(hits.front().entry);

  Rng rng(seed, "nei-evidence/" + std::string(claim));
  auto lines = rng.sample_indices(page.page_lines, m);
  std::sort(lines.begin(), lines.end());
  std::vector<EvidenceSentenceId> out;
  out.reserve(lines.size());
  for (auto line : lines) out.push_back({page.page, static_cast<int>(line)});
  return out;
}

std::size_t count_negation_cues(std::string_view text) {
  std::size_t n = 0;
  for (const auto& w : words(text)) n += is_cue(w) ? 1 : 0;
  return n;
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& w : words(text)) {
    if (is_cue(w)) continue;
    for (auto& token : tokenize(w)) out.push_back(std::move(token));
  }
  return out;
}

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) /
         static_cast<double>(sa.size() + sb.size() - common);
}

Verdict heuristic_verdict(std::string_view claim,
                          const std::vector<std::string>& evidence_sentences,
                          const VerdictConfig& config) {
  const auto claim_tokens = content_tokens(claim);
  double best = 0.0;
  const std::string* best_sentence = nullptr;
  for (const auto& sentence : evidence_sentences) {
    const double overlap = jaccard(claim_tokens, content_tokens(sentence));
    if (best_sentence == nullptr || overlap > best) {
      best = overlap;
      best_sentence = &sentence;
    }
  }
  Verdict verdict;
  verdict.confidence = best;
  if (best_sentence == nullptr || best < config.overlap_threshold) {
    verdict.label = Label::kNotEnoughInfo;
    return verdict;
  }
  const std::size_t parity =
      (count_negation_cues(claim) + count_negation_cues(*best_sentence)) % 2;
  verdict.label = parity == 0 ? Label::kSupported : Label::kRefuted;
  return verdict;
}

BaselinePipeline::BaselinePipeline(std::shared_ptr<const WikiSnapshot> snapshot,
                                   PipelineConfig config)
    : snapshot_(std::move(snapshot)),
      config_(config),
      documents_(TfidfIndex::build(*snapshot_, Granularity::kDocument)),
      sentences_(TfidfIndex::build(*snapshot_, Granularity::kSentence)) {
  if (config_.pages == 0 || config_.sentences == 0) {
    throw Error("retrieval depths must be at least 1");
  }
}

std::vector<Prediction> BaselinePipeline::predict(
    const std::vector<Instance>& instances, PipelineMode mode) const {
  if (mode == PipelineMode::kOracle) {
    const auto missing = missing_evidence(*snapshot_, instances);
    if (!missing.empty()) {
      std::string list;
      for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
        list += (i ? ", " : "") + to_string(missing[i]);
      }
      if (missing.size() > 20) list += ", ...";
      throw Error("oracle mode: " + std::to_string(missing.size()) +
                  " gold evidence sentence(s) missing from the snapshot: " +
                  list);
    }
  }
  std::vector<Prediction> out;
  out.reserve(instances.size());
  for (const auto& instance : instances) {
    out.push_back(mode == PipelineMode::kOracle ? predict_oracle(instance)
                                                : predict_retrieved(instance));
  }
  return out;
}

Prediction BaselinePipeline::predict_oracle(const Instance& instance) const {
  Prediction prediction;
  prediction.instance_id = instance.id;
  std::vector<std::string> texts;
  if (instance.label == Label::kNotEnoughInfo || instance.evidence.empty()) {
    prediction.predicted_evidence = nearest_page_nei_evidence(
        documents_, instance.claim, config_.nei_sentences, config_.seed);
    for (const auto& id : prediction.predicted_evidence) {
      texts.push_back(snapshot_->lookup(id));
    }
  } else {
    std::set<EvidenceSentenceId> seen;
    for (const auto& combination : instance.evidence) {
      for (const auto& id : combination.sentences) {
        if (seen.insert(id).second) texts.push_back(snapshot_->lookup(id));
      }
    }
    prediction.predicted_evidence = instance.evidence.front().sentences;
  }
  prediction.predicted_label =
      heuristic_verdict(instance.claim, texts, config_.verdict).label;
  return prediction;
}

Prediction BaselinePipeline::predict_retrieved(const Instance& instance) const {
  std::set<std::string, std::less<>> pages;
  for (const auto& hit : documents_.retrieve(instance.claim, config_.pages)) {
    pages.insert(documents_.entry(hit.entry).page);
  }
  const auto hits = sentences_.retrieve(
      instance.claim, config_.sentences,
      [&](const TfidfIndex::Entry& e) { return pages.count(e.page) != 0; });

  Prediction prediction;
  prediction.instance_id = instance.id;
  std::vector<std::string> texts;
  for (const auto& hit : hits) {
    const auto id = sentences_.sentence_id(hit.entry);
    texts.push_back(snapshot_->lookup(id));
    prediction.predicted_evidence.push_back(id);
  }
  prediction.predicted_label =
      heuristic_verdict(instance.claim, texts, config_.verdict).label;
  return prediction;
}

SystemAdapter SystemAdapter::baseline(
    std::string name, std::shared_ptr<const BaselinePipeline> pipeline) {
  SystemAdapter adapter;
  adapter.name_ = std::move(name);
  adapter.pipeline_ = std::move(pipeline);
  return adapter;
}

SystemAdapter SystemAdapter::from_file(std::string name,
                                       const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return from_predictions(std::move(name), parse_predictions(in, path.string()));
}

SystemAdapter SystemAdapter::from_predictions(
    std::string name, std::vector<Prediction> predictions) {
  SystemAdapter adapter;
  adapter.name_ = std::move(name);
  adapter.predictions_ =
      std::make_shared<const std::vector<Prediction>>(std::move(predictions));
  return adapter;
}

std::vector<Prediction> SystemAdapter::predict(
    const std::vector<Instance>& instances, PipelineMode mode) const {
  if (pipeline_) return pipeline_->predict(instances, mode);

  std::unordered_map<std::string_view, const Prediction*> by_id;
  for (const auto& p : *predictions_) by_id.emplace(p.instance_id, &p);
  std::vector<Prediction> out;
  out.reserve(instances.size());
  for (const auto& instance : instances) {
    auto it = by_id.find(instance.id);
    if (it == by_id.end()) {
      throw Error("system \"" + name_ + "\" has no prediction for instance \"" +
                  instance.id + "\"");
    }
    out.push_back(*it->second);
  }
  return out;
}

std::vector<LabeledPrediction> run_pipeline(
    const SystemAdapter& adapter, const std::vector<Instance>& instances,
    PipelineMode mode) {
  return join_predictions(adapter.predict(instances, mode), instances);
}

}  // namespace fever_forge
