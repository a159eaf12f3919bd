#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace fever_forge {

// Seedable generator with a fully specified output sequence.
//
// A run has one integer seed. Each stochastic step draws from its own named
// substream: the engine is std::mt19937_64 seeded through std::seed_seq with
// the words {seed_lo, seed_hi, fnv1a64(stream)_lo, fnv1a64(stream)_hi}. Both
// the engine and std::seed_seq are exactly specified by the standard. Bounded
// integers use rejection sampling (threshold = 2^64 mod bound) and shuffles are
// Fisher-Yates from the back, so results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // `count` distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace fever_forge
