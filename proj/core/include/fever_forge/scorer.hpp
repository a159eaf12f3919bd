#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fever_forge/corpus.hpp"
#include "fever_forge/rules.hpp"

namespace fever_forge {

struct ScoreOptions {
  // Predicted evidence is cut to its first `max_evidence` entries before any
  // check. Zero disables the cap.
  std::size_t max_evidence = 5;
};

struct ScoreReport {
  double fever_score = 0.0;
  double label_accuracy = 0.0;
  std::size_t n = 0;
  std::size_t instance_correct = 0;
  std::size_t label_correct = 0;
};

struct EvidenceReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;  // summed over scored instances
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t instances = 0;  // non-NEI instances that were scored
};

// True when some gold combination is contained in `predicted` in full.
bool evidence_correct(const std::vector<EvidenceCombination>& gold,
                      const std::vector<EvidenceSentenceId>& predicted);

bool instance_correct(const LabeledPrediction& lp,
                      const ScoreOptions& options = {});

// Throws Error on empty input.
ScoreReport fever_score(const std::vector<LabeledPrediction>& preds,
                        const ScoreOptions& options = {});

// Sentence-level precision and recall per non-NEI instance, macro-averaged;
// f1 is the harmonic mean of the averaged precision and recall.
// Throws Error on empty input.
EvidenceReport evidence_prf(const std::vector<LabeledPrediction>& preds,
                            const ScoreOptions& options = {});

// nullopt is the bucket for instances without provenance (originals).
using Bucket = std::optional<TransformationClass>;

std::string bucket_name(const Bucket& bucket);

struct BreakdownRow {
  Bucket bucket;
  ScoreReport after;
  std::optional<ScoreReport> before;

  double accuracy_delta() const;
  double fever_delta() const;
};

// One row per non-empty bucket, transformation classes first (in class order)
// and the original bucket last.
std::vector<BreakdownRow> breakdown_by_class(
    const std::vector<LabeledPrediction>& preds,
    const std::map<std::string, TransformationClass>& provenance,
    const std::map<Bucket, ScoreReport>& baseline = {},
    const ScoreOptions& options = {});

std::vector<BreakdownRow> breakdown_by_class(
    const std::vector<LabeledPrediction>& preds,
    const std::map<std::string, TransformationClass>& provenance,
    const ScoreReport& baseline, const ScoreOptions& options = {});

// The per-class "before" population: for each class, the predictions on
// source instances that produced at least one output of that class.
std::map<Bucket, ScoreReport> baseline_by_class(
    const std::vector<LabeledPrediction>& source_preds,
    const std::vector<GeneratedInstance>& generated,
    const ScoreOptions& options = {});

std::map<std::string, TransformationClass> provenance_of(
    const std::vector<GeneratedInstance>& generated);

}  // namespace fever_forge
