#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/error.hpp"

namespace fever_forge {

class PatternError : public Error {
 public:
  PatternError(std::size_t offset, const std::string& reason)
      : Error("pattern error at offset " + std::to_string(offset) + ": " +
              reason),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A compiled rule pattern.
//
// The accepted dialect is deliberately small: literal text, `.`, the greedy
// quantifiers `*` `+` `?`, alternation, capturing groups and `(?:...)`
// groups. A backslash may escape one of the metacharacters `.*+?()|\` to make
// it literal. Character classes, anchors, counted repetition, lazy
// quantifiers, lookaround and backslash classes are rejected at compile time.
//
// Matching is always whole-text and follows backtracking priority order
// (leftmost alternative first, quantifiers greedy), so `(.+) is a (.+)` binds
// the longest possible first group.
class Pattern {
 public:
  static Pattern compile(std::string_view source);

  const std::string& source() const { return source_; }
  std::size_t group_count() const { return group_count_; }

  // One string per capturing group, in order of opening parenthesis. A group
  // that did not take part in the match binds the empty string.
  std::optional<std::vector<std::string>> match(std::string_view text) const;

 private:
  enum class Op { kChar, kAny, kSplit, kJmp, kSave, kMatch };
  struct Inst {
    Op op;
    char c = 0;
    int x = 0;  // jump / first-choice target, or capture slot
    int y = 0;  // second-choice target
  };

  class Compiler;

  Pattern() = default;

  std::string source_;
  std::size_t group_count_ = 0;
  std::vector<Inst> program_;
};

}  // namespace fever_forge
