#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/label.hpp"

namespace fever_forge {

// Non-fatal findings collected while loading (deduplicated evidence, snapshot
// gaps). Callers that do not care pass nullptr.
using Warnings = std::vector<std::string>;

// Spaces become underscores, case is kept, and %XX escapes are decoded once.
// An escape is left encoded when it would decode to '%' or to a hex digit, so
// the function is idempotent.
std::string canonicalize_title(std::string_view title);

struct EvidenceSentenceId {
  std::string page;  // canonical title
  int line = 0;

  auto operator<=>(const EvidenceSentenceId&) const = default;
};

std::string to_string(const EvidenceSentenceId& id);

// One acceptable set of sentences; all of them are needed together.
struct EvidenceCombination {
  std::vector<EvidenceSentenceId> sentences;

  bool operator==(const EvidenceCombination&) const = default;
};

struct Instance {
  std::string id;
  std::string claim;
  Label label = Label::kNotEnoughInfo;
  std::vector<EvidenceCombination> evidence;

  bool operator==(const Instance&) const = default;
};

struct Prediction {
  std::string instance_id;
  Label predicted_label = Label::kNotEnoughInfo;
  std::vector<EvidenceSentenceId> predicted_evidence;  // ranked

  bool operator==(const Prediction&) const = default;
};

struct LabeledPrediction {
  Instance gold;
  Prediction pred;
};

class WikiSnapshot {
 public:
  WikiSnapshot() = default;

  // Throws Error when the title is already present.
  void add_page(std::string_view title, std::vector<std::string> lines);

  bool empty() const { return pages_.empty(); }
  std::size_t size() const { return pages_.size(); }

  const std::vector<std::string>* find_page(std::string_view title) const;
  const std::string* find(const EvidenceSentenceId& id) const;
  // Throws Error on an unknown page or an out-of-range line.
  const std::string& lookup(const EvidenceSentenceId& id) const;

  // Pages ordered by canonical title.
  const std::map<std::string, std::vector<std::string>, std::less<>>& pages()
      const {
    return pages_;
  }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> pages_;
};

// Dataset files: one JSON object per line with id, claim, label, evidence.
// Extra fields are ignored, so generated.jsonl also loads as a dataset.
std::vector<Instance> parse_dataset(std::istream& in,
                                    const std::string& source_name,
                                    Warnings* warnings = nullptr);
std::vector<Instance> load_dataset(const std::filesystem::path& path,
                                   Warnings* warnings = nullptr);

std::string instance_to_json(const Instance& instance);
void write_dataset(std::ostream& out, const std::vector<Instance>& instances);

std::vector<Prediction> parse_predictions(std::istream& in,
                                          const std::string& source_name);
std::vector<LabeledPrediction> join_predictions(
    const std::vector<Prediction>& predictions,
    const std::vector<Instance>& dataset);
std::vector<LabeledPrediction> load_predictions(
    const std::filesystem::path& path, const std::vector<Instance>& dataset);

std::string prediction_to_json(const Prediction& prediction);
void write_predictions(std::ostream& out,
                       const std::vector<Prediction>& predictions);

// Accepts a single JSON-lines file or a directory whose *.jsonl files are read
// in name order.
WikiSnapshot parse_wiki_snapshot(std::istream& in,
                                 const std::string& source_name,
                                 WikiSnapshot snapshot = {});
WikiSnapshot load_wiki_snapshot(const std::filesystem::path& path);

// Evidence ids referenced by the instances that the snapshot cannot resolve,
// sorted and unique.
std::vector<EvidenceSentenceId> missing_evidence(
    const WikiSnapshot& snapshot, const std::vector<Instance>& instances);

}  // namespace fever_forge
