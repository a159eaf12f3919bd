#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fever_forge {

struct BigramCount {
  std::string first;
  std::string second;
  std::size_t count = 0;

  bool operator==(const BigramCount&) const = default;
};

class BigramTable {
 public:
  using Key = std::pair<std::string, std::string>;

  void add(std::string first, std::string second, std::size_t n = 1);

  std::size_t count(const std::string& first, const std::string& second) const;
  std::size_t distinct() const { return counts_.size(); }
  std::size_t total() const { return total_; }
  bool empty() const { return counts_.empty(); }

  // Highest counts first; equal counts in lexicographic (first, second) order.
  std::vector<BigramCount> top(std::size_t k) const;

  const std::map<Key, std::size_t>& counts() const { return counts_; }

 private:
  std::map<Key, std::size_t> counts_;
  std::size_t total_ = 0;
};

// Lowercased whitespace tokens of the claim with trailing . ! ? removed.
std::vector<std::string> claim_tokens(const std::string& claim);

BigramTable bigram_frequencies(const std::vector<std::string>& claims);

}  // namespace fever_forge
