#include "fever_forge/rules.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "fever_forge/error.hpp"
#include "json.hpp"

namespace fever_forge {

using nlohmann::json;

namespace {

bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

// Largest $k referenced by the template; throws on $0.
int max_reference(std::string_view template_text) {
  int max_ref = 0;
  for (std::size_t i = 0; i + 1 < template_text.size(); ++i) {
    if (template_text[i] != '$') continue;
    const char d = template_text[i + 1];
    if (d == '0') throw Error("template references $0; groups start at $1");
    if (d >= '1' && d <= '9') max_ref = std::max(max_ref, d - '0');
  }
  return max_ref;
}

std::string collapse_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view class_file_name(TransformationClass cls) {
  switch (cls) {
    case TransformationClass::kEntailmentPreserving: return "preserving";
    case TransformationClass::kSimpleNegation: return "simple_negation";
    case TransformationClass::kComplexNegation: return "complex_negation";
  }
  return "?";
}

std::optional<TransformationClass> try_parse_class(std::string_view text) {
  for (auto cls : kAllTransformationClasses) {
    if (class_file_name(cls) == text) return cls;
  }
  return std::nullopt;
}

bool is_negation(TransformationClass cls) {
  return cls != TransformationClass::kEntailmentPreserving;
}

std::optional<Label> map_label(TransformationClass cls, Label label) {
  if (!is_negation(cls)) return label;
  switch (label) {
    case Label::kSupported: return Label::kRefuted;
    case Label::kRefuted: return Label::kSupported;
    case Label::kNotEnoughInfo: return std::nullopt;
  }
  return std::nullopt;
}

Rule make_rule(std::string rule_id, std::string_view pattern,
               std::string template_text, TransformationClass cls) {
  if (rule_id.empty()) throw Error("rule_id is empty");
  if (trim(template_text).empty()) {
    throw Error("rule \"" + rule_id + "\": template is empty");
  }
  Pattern compiled = [&] {
    try {
      return Pattern::compile(pattern);
    } catch (const PatternError& e) {
      throw Error("rule \"" + rule_id + "\": " + e.what());
    }
  }();
  const int max_ref = max_reference(template_text);
  if (static_cast<std::size_t>(max_ref) > compiled.group_count()) {
    throw Error("rule \"" + rule_id + "\": template references $" +
                std::to_string(max_ref) + " but the pattern has " +
                std::to_string(compiled.group_count()) + " capture group(s)");
  }
  return Rule{std::move(rule_id), std::move(compiled), std::move(template_text),
              cls};
}

void RuleSet::add(Rule rule) {
  if (find(rule.rule_id) != nullptr) {
    throw Error("duplicate rule_id \"" + rule.rule_id + "\"");
  }
  rules_.push_back(std::move(rule));
}

const Rule* RuleSet::find(std::string_view rule_id) const {
  for (const auto& rule : rules_) {
    if (rule.rule_id == rule_id) return &rule;
  }
  return nullptr;
}

std::map<TransformationClass, std::size_t> RuleSet::class_counts() const {
  std::map<TransformationClass, std::size_t> counts;
  for (auto cls : kAllTransformationClasses) counts[cls] = 0;
  for (const auto& rule : rules_) ++counts[rule.cls];
  return counts;
}

RuleSet parse_ruleset(std::istream& in, const std::string& source_name) {
  RuleSet rules;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      const json record = json::parse(line);
      if (!record.is_object()) throw Error("rule record is not a JSON object");
      for (const char* field : {"rule_id", "class", "pattern", "template"}) {
        if (!record.contains(field) || !record.at(field).is_string()) {
          throw Error(std::string("missing or non-string field \"") + field +
                      "\"");
        }
      }
      const auto cls = try_parse_class(record.at("class").get<std::string>());
      if (!cls) {
        throw Error("unknown class \"" + record.at("class").get<std::string>() +
                    "\"");
      }
      rules.add(make_rule(record.at("rule_id").get<std::string>(),
                          record.at("pattern").get<std::string>(),
                          record.at("template").get<std::string>(), *cls));
    } catch (const json::exception& e) {
      throw ParseError(source_name, number, e.what());
    } catch (const Error& e) {
      throw ParseError(source_name, number, e.what());
    }
  }
  return rules;
}

RuleSet parse_ruleset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_ruleset(in, path.string());
}

std::string_view strip_terminal_punctuation(std::string_view claim) {
  claim = trim(claim);
  while (!claim.empty() && is_terminal(claim.back())) claim.remove_suffix(1);
  return trim(claim);
}

std::optional<std::vector<std::string>> match_rule(const Rule& rule,
                                                   std::string_view claim) {
  return rule.pattern.match(strip_terminal_punctuation(claim));
}

std::string expand_template(std::string_view template_text,
                            const std::vector<std::string>& bindings) {
  std::string out;
  out.reserve(template_text.size() + 32);
  for (std::size_t i = 0; i < template_text.size(); ++i) {
    const char c = template_text[i];
    if (c == '$' && i + 1 < template_text.size() &&
        template_text[i + 1] >= '1' && template_text[i + 1] <= '9') {
      const auto k = static_cast<std::size_t>(template_text[i + 1] - '1');
      if (k < bindings.size()) out += bindings[k];
      ++i;
      continue;
    }
    out.push_back(c);
  }
  return out;
}

std::string generated_id(std::string_view source_id, std::string_view rule_id) {
  std::string id(source_id);
  id.push_back('#');
  id.append(rule_id);
  return id;
}

std::optional<GeneratedInstance> apply_rule(const Rule& rule,
                                            const Instance& source) {
  const auto label = map_label(rule.cls, source.label);
  if (!label) return std::nullopt;
  const auto bindings = match_rule(rule, source.claim);
  if (!bindings) return std::nullopt;

  std::string claim = collapse_spaces(expand_template(rule.template_text,
                                                      *bindings));
  while (!claim.empty() && (is_terminal(claim.back()) || is_space(claim.back()))) {
    claim.pop_back();
  }
  if (claim.empty()) return std::nullopt;
  if (claim.front() >= 'a' && claim.front() <= 'z') {
    claim.front() = static_cast<char>(claim.front() - 'a' + 'A');
  }
  const std::string_view original = trim(source.claim);
  claim.push_back(!original.empty() && is_terminal(original.back())
                      ? original.back()
                      : '.');

  GeneratedInstance out;
  out.instance.id = generated_id(source.id, rule.rule_id);
  out.instance.claim = std::move(claim);
  out.instance.label = *label;
  out.instance.evidence = source.evidence;
  out.source_id = source.id;
  out.rule_id = rule.rule_id;
  out.cls = rule.cls;
  out.source_claim = source.claim;
  return out;
}

GenerationResult generate_adversarial_dataset(
    const RuleSet& rules, const std::vector<Instance>& dataset) {
  GenerationResult result;
  std::unordered_set<std::string> ids;
  for (const auto& source : dataset) {
    bool fired = false;
    for (const auto& rule : rules.rules()) {
      auto generated = apply_rule(rule, source);
      if (!generated) continue;
      if (!ids.insert(generated->instance.id).second) {
        throw Error("generated id collision \"" + generated->instance.id +
                    "\"");
      }
      fired = true;
      result.generated.push_back(std::move(*generated));
    }
    if (fired) result.matched.push_back(source);
  }
  return result;
}

std::string generated_to_json(const GeneratedInstance& generated) {
  json record = json::parse(instance_to_json(generated.instance));
  record["source_id"] = generated.source_id;
  record["rule_id"] = generated.rule_id;
  record["class"] = class_file_name(generated.cls);
  record["source_claim"] = generated.source_claim;
  return record.dump();
}

std::vector<GeneratedInstance> parse_generated(std::istream& in,
                                               const std::string& source_name) {
  // Two passes over the same text: the dataset parser validates the instance
  // fields, the second pass picks up provenance.
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::istringstream first(text);
  std::vector<Instance> instances = parse_dataset(first, source_name);

  std::vector<GeneratedInstance> out;
  out.reserve(instances.size());
  std::istringstream second(text);
  std::string line;
  std::size_t number = 0;
  std::size_t index = 0;
  while (std::getline(second, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const json record = json::parse(line);
    GeneratedInstance g;
    g.instance = std::move(instances[index++]);
    try {
      g.source_id = record.at("source_id").is_string()
                        ? record.at("source_id").get<std::string>()
                        : std::to_string(record.at("source_id").get<long long>());
      g.rule_id = record.at("rule_id").get<std::string>();
      const auto cls = try_parse_class(record.at("class").get<std::string>());
      if (!cls) throw Error("unknown class");
      g.cls = *cls;
      if (record.contains("source_claim") && record.at("source_claim").is_string()) {
        g.source_claim = record.at("source_claim").get<std::string>();
      }
    } catch (const std::exception& e) {
      throw ParseError(source_name, number,
                       std::string("bad provenance fields: ") + e.what());
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<GeneratedInstance> load_generated(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_generated(in, path.string());
}

}  // namespace fever_forge
