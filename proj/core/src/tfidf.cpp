#include "fever_forge/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fever_forge/error.hpp"

namespace fever_forge {

namespace {

bool is_token_char(unsigned char c) {
  return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

void normalize(TfidfIndex::SparseVector& v) {
  double norm = 0.0;
  for (const auto& [term, w] : v) norm += w * w;
  if (norm <= 0.0) return;
  norm = std::sqrt(norm);
  for (auto& [term, w] : v) w /= norm;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                             : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TfidfIndex TfidfIndex::build(const WikiSnapshot& snapshot,
                             Granularity granularity) {
  if (snapshot.empty()) throw Error("cannot index an empty snapshot");
  TfidfIndex index;
  index.granularity_ = granularity;

  std::vector<std::map<std::size_t, double>> counts;
  std::vector<std::size_t> df;
  auto add_entry = [&](Entry entry, std::string_view text) {
    std::map<std::size_t, double> tf;
    for (auto& token : tokenize(text)) {
      auto [it, inserted] =
          index.vocabulary_.emplace(std::move(token), index.vocabulary_.size());
      if (inserted) df.push_back(0);
      tf[it->second] += 1.0;
    }
    for (const auto& [term, n] : tf) ++df[term];
    index.entries_.push_back(std::move(entry));
    counts.push_back(std::move(tf));
  };

  for (const auto& [title, lines] : snapshot.pages()) {
    if (granularity == Granularity::kDocument) {
      std::string text;
      for (const auto& line : lines) {
        if (!text.empty()) text.push_back(' ');
        text += line;
      }
      add_entry({title, -1, lines.size()}, text);
    } else {
      for (std::size_t i = 0; i < lines.size(); ++i) {
        add_entry({title, static_cast<int>(i), lines.size()}, lines[i]);
      }
    }
  }

  const auto docs = static_cast<double>(index.entries_.size());
  index.idf_.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) {
    index.idf_[t] =
        std::log((1.0 + docs) / (1.0 + static_cast<double>(df[t]))) + 1.0;
  }
  index.postings_.resize(df.size());
  index.vectors_.reserve(counts.size());
  for (std::size_t e = 0; e < counts.size(); ++e) {
    SparseVector v;
    v.reserve(counts[e].size());
    for (const auto& [term, n] : counts[e]) v.emplace_back(term, n * index.idf_[term]);
    normalize(v);
    for (const auto& [term, w] : v) index.postings_[term].emplace_back(e, w);
    index.vectors_.push_back(std::move(v));
  }
  return index;
}

double TfidfIndex::idf(std::string_view term) const {
  auto it = vocabulary_.find(std::string(term));
  return it == vocabulary_.end() ? 0.0 : idf_[it->second];
}

TfidfIndex::SparseVector TfidfIndex::vectorize(std::string_view text) const {
  std::map<std::size_t, double> tf;
  for (const auto& token : tokenize(text)) {
    auto it = vocabulary_.find(token);
    if (it != vocabulary_.end()) tf[it->second] += 1.0;
  }
  SparseVector v;
  v.reserve(tf.size());
  for (const auto& [term, n] : tf) v.emplace_back(term, n * idf_[term]);
  normalize(v);
  return v;
}

std::vector<TfidfIndex::Hit> TfidfIndex::retrieve(
    std::string_view query, std::size_t k,
    const std::function<bool(const Entry&)>& accept) const {
  std::vector<double> scores(entries_.size(), 0.0);
  for (const auto& [term, qw] : vectorize(query)) {
    for (const auto& [entry, dw] : postings_[term]) scores[entry] += qw * dw;
  }
  std::vector<Hit> hits;
  hits.reserve(entries_.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    if (accept && !accept(entries_[e])) continue;
    hits.push_back({e, std::clamp(scores[e], 0.0, 1.0)});
  }
  // Entries are stored in (page, line) order, so the entry index is the
  // tie-break key.
  const auto by_rank = [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entry < b.entry;
  };
  if (hits.size() > k) {
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(k),
                      hits.end(), by_rank);
    hits.resize(k);
  } else {
    std::sort(hits.begin(), hits.end(), by_rank);
  }
  return hits;
}

EvidenceSentenceId TfidfIndex::sentence_id(std::size_t entry) const {
  const Entry& e = entries_[entry];
  return {e.page, e.line < 0 ? 0 : e.line};
}

TfidfIndex build_index(const WikiSnapshot& snapshot, Granularity granularity) {
  return TfidfIndex::build(snapshot, granularity);
}

std::vector<TfidfIndex::Hit> retrieve(const TfidfIndex& index,
                                      std::string_view claim, std::size_t k) {
  if (k == 0) throw Error("retrieve: k must be at least 1");
  return index.retrieve(claim, k);
}

double cosine(const TfidfIndex::SparseVector& a,
              const TfidfIndex::SparseVector& b) {
  // Both vectors are sorted by term id.
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    } else if (a[i].first < b[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return dot;
}

}  // namespace fever_forge
