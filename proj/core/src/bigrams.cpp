#include "fever_forge/bigrams.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "fever_forge/rules.hpp"

namespace fever_forge {

void BigramTable::add(std::string first, std::string second, std::size_t n) {
  counts_[Key{std::move(first), std::move(second)}] += n;
  total_ += n;
}

std::size_t BigramTable::count(const std::string& first,
                               const std::string& second) const {
  auto it = counts_.find(Key{first, second});
  return it == counts_.end() ? 0 : it->second;
}

std::vector<BigramCount> BigramTable::top(std::size_t k) const {
  std::vector<BigramCount> rows;
  rows.reserve(counts_.size());
  for (const auto& [key, n] : counts_) {
    rows.push_back({key.first, key.second, n});
  }
  // counts_ is already in key order, so a stable sort on count keeps ties
  // lexicographic.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BigramCount& a, const BigramCount& b) {
                     return a.count > b.count;
                   });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

std::vector<std::string> claim_tokens(const std::string& claim) {
  std::istringstream in{std::string(strip_terminal_punctuation(claim))};
  std::vector<std::string> tokens;
  std::string token;
  while (in >> token) {
    std::transform(token.begin(), token.end(), token.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    tokens.push_back(std::move(token));
  }
  return tokens;
}

BigramTable bigram_frequencies(const std::vector<std::string>& claims) {
  BigramTable table;
  for (const auto& claim : claims) {
    const auto tokens = claim_tokens(claim);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      table.add(tokens[i - 1], tokens[i]);
    }
  }
  return table;
}

}  // namespace fever_forge
