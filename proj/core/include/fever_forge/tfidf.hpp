#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fever_forge/corpus.hpp"

namespace fever_forge {

// Lowercase; split on every ASCII character that is not a letter or digit.
// Bytes >= 0x80 stay inside tokens so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

enum class Granularity { kDocument, kSentence };

// tf-idf index with raw term counts, idf = ln((1 + D) / (1 + df)) + 1 and
// L2-normalised vectors, so a dot product is a cosine similarity.
class TfidfIndex {
 public:
  struct Entry {
    std::string page;
    int line = -1;  // -1 at document granularity
    std::size_t page_lines = 0;
  };

  struct Hit {
    std::size_t entry = 0;
    double score = 0.0;
  };

  using SparseVector = std::vector<std::pair<std::size_t, double>>;

  // Throws Error on an empty snapshot.
  static TfidfIndex build(const WikiSnapshot& snapshot, Granularity granularity);

  Granularity granularity() const { return granularity_; }
  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t vocabulary_size() const { return idf_.size(); }
  double idf(std::string_view term) const;

  SparseVector vectorize(std::string_view text) const;
  const SparseVector& vector_of(std::size_t entry) const { return vectors_[entry]; }

  // Top k by cosine similarity; equal scores are ordered by (page, line).
  // `accept`, when given, restricts the candidate entries.
  std::vector<Hit> retrieve(
      std::string_view query, std::size_t k,
      const std::function<bool(const Entry&)>& accept = {}) const;

  EvidenceSentenceId sentence_id(std::size_t entry) const;

 private:
  Granularity granularity_ = Granularity::kDocument;
  std::vector<Entry> entries_;  // in (page, line) order
  std::unordered_map<std::string, std::size_t> vocabulary_;
  std::vector<double> idf_;
  std::vector<SparseVector> vectors_;
  std::vector<std::vector<std::pair<std::size_t, double>>> postings_;
};

TfidfIndex build_index(const WikiSnapshot& snapshot, Granularity granularity);

std::vector<TfidfIndex::Hit> retrieve(const TfidfIndex& index,
                                      std::string_view claim, std::size_t k);

double cosine(const TfidfIndex::SparseVector& a,
              const TfidfIndex::SparseVector& b);

}  // namespace fever_forge
