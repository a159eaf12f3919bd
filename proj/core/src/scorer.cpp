#include "fever_forge/scorer.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fever_forge/error.hpp"

namespace fever_forge {

namespace {

std::vector<EvidenceSentenceId> truncated(
    const std::vector<EvidenceSentenceId>& predicted,
    const ScoreOptions& options) {
  if (options.max_evidence == 0 || predicted.size() <= options.max_evidence) {
    return predicted;
  }
  return {predicted.begin(),
          predicted.begin() + static_cast<long>(options.max_evidence)};
}

}  // namespace

bool evidence_correct(const std::vector<EvidenceCombination>& gold,
                      const std::vector<EvidenceSentenceId>& predicted) {
  const std::set<EvidenceSentenceId> found(predicted.begin(), predicted.end());
  return std::any_of(gold.begin(), gold.end(), [&](const auto& combination) {
    return std::all_of(combination.sentences.begin(),
                       combination.sentences.end(),
                       [&](const auto& id) { return found.count(id) != 0; });
  });
}

bool instance_correct(const LabeledPrediction& lp,
                      const ScoreOptions& options) {
  if (lp.gold.label != lp.pred.predicted_label) return false;
  if (lp.gold.label == Label::kNotEnoughInfo) return true;
  return evidence_correct(lp.gold.evidence,
                          truncated(lp.pred.predicted_evidence, options));
}

ScoreReport fever_score(const std::vector<LabeledPrediction>& preds,
                        const ScoreOptions& options) {
  if (preds.empty()) throw Error("cannot score an empty prediction set");
  ScoreReport report;
  report.n = preds.size();
  for (const auto& lp : preds) {
    if (lp.gold.label == lp.pred.predicted_label) ++report.label_correct;
    if (instance_correct(lp, options)) ++report.instance_correct;
  }
  const auto n = static_cast<double>(report.n);
  report.fever_score = static_cast<double>(report.instance_correct) / n;
  report.label_accuracy = static_cast<double>(report.label_correct) / n;
  return report;
}

EvidenceReport evidence_prf(const std::vector<LabeledPrediction>& preds,
                            const ScoreOptions& options) {
  if (preds.empty()) throw Error("cannot score an empty prediction set");
  EvidenceReport report;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (const auto& lp : preds) {
    if (lp.gold.label == Label::kNotEnoughInfo) continue;
    std::set<EvidenceSentenceId> gold;
    for (const auto& combination : lp.gold.evidence) {
      gold.insert(combination.sentences.begin(), combination.sentences.end());
    }
    const auto cut = truncated(lp.pred.predicted_evidence, options);
    const std::set<EvidenceSentenceId> predicted(cut.begin(), cut.end());
    std::size_t hits = 0;
    for (const auto& id : predicted) hits += gold.count(id);

    ++report.instances;
    report.true_positives += hits;
    report.predicted += predicted.size();
    report.gold += gold.size();
    if (!predicted.empty()) {
      precision_sum += static_cast<double>(hits) /
                       static_cast<double>(predicted.size());
    }
    if (!gold.empty()) {
      recall_sum += static_cast<double>(hits) / static_cast<double>(gold.size());
    }
  }
  if (report.instances == 0) return report;
  const auto n = static_cast<double>(report.instances);
  report.precision = precision_sum / n;
  report.recall = recall_sum / n;
  const double denom = report.precision + report.recall;
  report.f1 = denom > 0.0 ? 2.0 * report.precision * report.recall / denom : 0.0;
  return report;
}

std::string bucket_name(const Bucket& bucket) {
  return bucket ? std::string(class_file_name(*bucket)) : "original";
}

double BreakdownRow::accuracy_delta() const {
  return before ? after.label_accuracy - before->label_accuracy : 0.0;
}

double BreakdownRow::fever_delta() const {
  return before ? after.fever_score - before->fever_score : 0.0;
}

std::vector<BreakdownRow> breakdown_by_class(
    const std::vector<LabeledPrediction>& preds,
    const std::map<std::string, TransformationClass>& provenance,
    const std::map<Bucket, ScoreReport>& baseline,
    const ScoreOptions& options) {
  std::map<Bucket, std::vector<LabeledPrediction>> slices;
  for (const auto& lp : preds) {
    auto it = provenance.find(lp.gold.id);
    const Bucket bucket =
        it == provenance.end() ? Bucket{} : Bucket{it->second};
    slices[bucket].push_back(lp);
  }
  std::vector<BreakdownRow> rows;
  auto emit = [&](const Bucket& bucket) {
    auto it = slices.find(bucket);
    if (it == slices.end() || it->second.empty()) return;
    BreakdownRow row{bucket, fever_score(it->second, options), std::nullopt};
    if (auto b = baseline.find(bucket); b != baseline.end()) row.before = b->second;
    rows.push_back(std::move(row));
  };
  for (auto cls : kAllTransformationClasses) emit(cls);
  emit(std::nullopt);
  return rows;
}

std::vector<BreakdownRow> breakdown_by_class(
    const std::vector<LabeledPrediction>& preds,
    const std::map<std::string, TransformationClass>& provenance,
    const ScoreReport& baseline, const ScoreOptions& options) {
  auto rows = breakdown_by_class(preds, provenance, std::map<Bucket, ScoreReport>{}, options);
  for (auto& row : rows) row.before = baseline;
  return rows;
}

std::map<Bucket, ScoreReport> baseline_by_class(
    const std::vector<LabeledPrediction>& source_preds,
    const std::vector<GeneratedInstance>& generated,
    const ScoreOptions& options) {
  std::map<TransformationClass, std::set<std::string>> sources;
  for (const auto& g : generated) sources[g.cls].insert(g.source_id);

  std::map<Bucket, ScoreReport> out;
  for (const auto& [cls, ids] : sources) {
    std::vector<LabeledPrediction> slice;
    for (const auto& lp : source_preds) {
      if (ids.count(lp.gold.id) != 0) slice.push_back(lp);
    }
    if (!slice.empty()) out[cls] = fever_score(slice, options);
  }
  return out;
}

std::map<std::string, TransformationClass> provenance_of(
    const std::vector<GeneratedInstance>& generated) {
  std::map<std::string, TransformationClass> out;
  for (const auto& g : generated) out.emplace(g.instance.id, g.cls);
  return out;
}

}  // namespace fever_forge
