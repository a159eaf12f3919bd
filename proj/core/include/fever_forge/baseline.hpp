#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/corpus.hpp"
#include "fever_forge/label.hpp"
#include "fever_forge/tfidf.hpp"

namespace fever_forge {

// Sentences drawn uniformly (without replacement) from the page nearest to the
// claim, returned in line order. Stands in for gold evidence of NEI claims in
// oracle mode. `doc_index` must be document-granular.
std::vector<EvidenceSentenceId> nearest_page_nei_evidence(
    const TfidfIndex& doc_index, std::string_view claim, std::size_t m,
    std::uint64_t seed);

struct VerdictConfig {
  double overlap_threshold = 0.4;  // Jaccard over content tokens
};

struct Verdict {
  Label label = Label::kNotEnoughInfo;
  double confidence = 0.0;
};

// Negation cues: not, n't, never, no, outside, wasn't, isn't (and any other
// token ending in n't).
std::size_t count_negation_cues(std::string_view text);

// Lowercased alphanumeric tokens of the non-cue words.
std::vector<std::string> content_tokens(std::string_view text);

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

// Word-overlap stand-in for an NLI model. Finds the evidence sentence with the
// highest content-token Jaccard overlap; below the threshold the verdict is
// NOT_ENOUGH_INFO, otherwise the parity of negation cues in claim plus that
// sentence decides SUPPORTED (even) or REFUTED (odd).
Verdict heuristic_verdict(std::string_view claim,
                          const std::vector<std::string>& evidence_sentences,
                          const VerdictConfig& config = {});

enum class PipelineMode { kOracle, kRetrieved };

struct PipelineConfig {
  std::size_t pages = 5;          // documents kept after page retrieval
  std::size_t sentences = 5;      // sentences kept after sentence retrieval
  std::size_t nei_sentences = 5;  // NearestP sample size in oracle mode
  std::uint64_t seed = 0;
  VerdictConfig verdict;
};

// TF-IDF retrieval plus the verdict heuristic over one wiki snapshot.
class BaselinePipeline {
 public:
  BaselinePipeline(std::shared_ptr<const WikiSnapshot> snapshot,
                   PipelineConfig config = {});

  // Throws Error listing unresolved gold evidence in oracle mode.
  std::vector<Prediction> predict(const std::vector<Instance>& instances,
                                  PipelineMode mode) const;

  const TfidfIndex& document_index() const { return documents_; }
  const TfidfIndex& sentence_index() const { return sentences_; }

 private:
  Prediction predict_oracle(const Instance& instance) const;
  Prediction predict_retrieved(const Instance& instance) const;

  std::shared_ptr<const WikiSnapshot> snapshot_;
  PipelineConfig config_;
  TfidfIndex documents_;
  TfidfIndex sentences_;
};

// A named source of predictions: the built-in pipeline or a predictions file
// produced by an external system.
class SystemAdapter {
 public:
  static SystemAdapter baseline(std::string name,
                                std::shared_ptr<const BaselinePipeline> pipeline);
  static SystemAdapter from_file(std::string name,
                                 const std::filesystem::path& path);
  static SystemAdapter from_predictions(std::string name,
                                        std::vector<Prediction> predictions);

  const std::string& name() const { return name_; }

  // Exactly one prediction per requested instance, in request order. File
  // sources throw Error when a requested id has no prediction.
  std::vector<Prediction> predict(const std::vector<Instance>& instances,
                                  PipelineMode mode) const;

 private:
  SystemAdapter() = default;

  std::string name_;
  std::shared_ptr<const BaselinePipeline> pipeline_;
  std::shared_ptr<const std::vector<Prediction>> predictions_;
};

std::vector<LabeledPrediction> run_pipeline(
    const SystemAdapter& adapter, const std::vector<Instance>& instances,
    PipelineMode mode);

}  // namespace fever_forge
