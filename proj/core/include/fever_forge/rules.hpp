#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/corpus.hpp"
#include "fever_forge/label.hpp"
#include "fever_forge/pattern.hpp"

namespace fever_forge {

enum class TransformationClass {
  kEntailmentPreserving,
  kSimpleNegation,
  kComplexNegation,
};

inline constexpr TransformationClass kAllTransformationClasses[] = {
    TransformationClass::kEntailmentPreserving,
    TransformationClass::kSimpleNegation,
    TransformationClass::kComplexNegation,
};

// "preserving" | "simple_negation" | "complex_negation"
std::string_view class_file_name(TransformationClass cls);
std::optional<TransformationClass> try_parse_class(std::string_view text);

bool is_negation(TransformationClass cls);

// Preserving classes keep the label; negations swap SUPPORTED and REFUTED and
// have no image for NOT_ENOUGH_INFO.
std::optional<Label> map_label(TransformationClass cls, Label label);

struct Rule {
  std::string rule_id;
  Pattern pattern;
  std::string template_text;  // $1..$9 refer to capture groups
  TransformationClass cls;
};

// Validates the template against the pattern's group count. Throws Error.
Rule make_rule(std::string rule_id, std::string_view pattern,
               std::string template_text, TransformationClass cls);

class RuleSet {
 public:
  RuleSet() = default;

  // Throws Error on a duplicate rule_id.
  void add(Rule rule);

  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  const Rule* find(std::string_view rule_id) const;

  std::map<TransformationClass, std::size_t> class_counts() const;

 private:
  std::vector<Rule> rules_;
};

// One JSON object per line: rule_id, class, pattern, template.
RuleSet parse_ruleset(std::istream& in, const std::string& source_name);
RuleSet parse_ruleset(const std::filesystem::path& path);

// Claim text with surrounding whitespace and trailing . ! ? removed; this is
// what patterns are matched against.
std::string_view strip_terminal_punctuation(std::string_view claim);

std::optional<std::vector<std::string>> match_rule(const Rule& rule,
                                                   std::string_view claim);

// Substitutes $1..$9. References past the bindings expand to nothing.
std::string expand_template(std::string_view template_text,
                            const std::vector<std::string>& bindings);

struct GeneratedInstance {
  Instance instance;
  std::string source_id;
  std::string rule_id;
  TransformationClass cls;
  std::string source_claim;  // shown to reviewers next to the rewrite

  bool operator==(const GeneratedInstance&) const = default;
};

// `<source_id>#<rule_id>`
std::string generated_id(std::string_view source_id, std::string_view rule_id);

std::optional<GeneratedInstance> apply_rule(const Rule& rule,
                                            const Instance& source);

struct GenerationResult {
  std::vector<Instance> matched;             // sources with >= 1 output
  std::vector<GeneratedInstance> generated;  // dataset-major, rule-minor
};

GenerationResult generate_adversarial_dataset(
    const RuleSet& rules, const std::vector<Instance>& dataset);

// Generated records are dataset records plus source_id, rule_id and class.
std::string generated_to_json(const GeneratedInstance& generated);
std::vector<GeneratedInstance> parse_generated(std::istream& in,
                                               const std::string& source_name);
std::vector<GeneratedInstance> load_generated(
    const std::filesystem::path& path);

}  // namespace fever_forge
