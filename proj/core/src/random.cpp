#include "fever_forge/random.hpp"

#include <numeric>

#include "fever_forge/error.hpp"

namespace fever_forge {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::string_view stream) {
  const std::uint64_t tag = fnv1a64(stream);
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag),
                    static_cast<std::uint32_t>(tag >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

Rng::Rng(std::uint64_t seed, std::string_view stream)
    : engine_(seeded_engine(seed, stream)) {}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t count) {
  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  // Partial Fisher-Yates from the front: position i receives a uniform pick
  // from the remaining tail.
  if (count > n) count = n;
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  return indices;
}

}  // namespace fever_forge
