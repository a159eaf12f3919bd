#include "fever_forge/tournament.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "fever_forge/error.hpp"
#include "fever_forge/random.hpp"
#include "json.hpp"

namespace fever_forge {

using nlohmann::json;

std::vector<GeneratedInstance> balance_classes(
    const std::vector<GeneratedInstance>& instances, std::uint64_t seed) {
  std::map<Label, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    by_label[instances[i].instance.label].push_back(i);
  }
  if (by_label.empty()) return {};
  std::size_t minimum = instances.size();
  for (const auto& [label, members] : by_label) {
    minimum = std::min(minimum, members.size());
  }

  std::vector<bool> keep(instances.size(), false);
  for (const auto& [label, members] : by_label) {
    if (members.size() == minimum) {
      for (auto i : members) keep[i] = true;
      continue;
    }
    Rng rng(seed, "balance/" + std::string(label_name(label)));
    for (auto k : rng.sample_indices(members.size(), minimum)) {
      keep[members[k]] = true;
    }
  }
  std::vector<GeneratedInstance> out;
  out.reserve(minimum * by_label.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (keep[i]) out.push_back(instances[i]);
  }
  return out;
}

std::map<std::pair<Label, TransformationClass>, std::size_t>
proportional_allocation(
    const std::map<std::pair<Label, TransformationClass>, std::size_t>& sizes,
    std::size_t n) {
  std::size_t total = 0;
  for (const auto& [key, size] : sizes) total += size;
  if (n > total) {
    throw Error("cannot sample " + std::to_string(n) + " of " +
                std::to_string(total) + " instances");
  }
  std::map<std::pair<Label, TransformationClass>, std::size_t> quota;
  if (total == 0) return quota;

  // Exact integer arithmetic: quota = floor(n*size/total), remainder
  // n*size mod total decides who receives the leftover units.
  struct Remainder {
    std::pair<Label, TransformationClass> key;
    std::size_t value;
  };
  // n <= total < 2^32 keeps n*size within 64 bits.
  if (total >= (std::uint64_t{1} << 32)) {
    throw Error("stratified allocation supports fewer than 2^32 instances");
  }
  std::vector<Remainder> remainders;
  std::size_t assigned = 0;
  for (const auto& [key, size] : sizes) {
    const std::uint64_t scaled = std::uint64_t{n} * size;
    quota[key] = static_cast<std::size_t>(scaled / total);
    assigned += quota[key];
    remainders.push_back({key, static_cast<std::size_t>(scaled % total)});
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const Remainder& a, const Remainder& b) {
                     return a.value > b.value;
                   });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
    ++quota[remainders[i].key];
  }
  return quota;
}

std::vector<GeneratedInstance> stratified_sample(
    const std::vector<GeneratedInstance>& instances, std::size_t n,
    std::uint64_t seed) {
  if (n > instances.size()) {
    throw Error("sample size " + std::to_string(n) + " exceeds the " +
                std::to_string(instances.size()) + " available instances");
  }
  std::map<std::pair<Label, TransformationClass>, std::vector<std::size_t>>
      strata;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    strata[{instances[i].instance.label, instances[i].cls}].push_back(i);
  }
  std::map<std::pair<Label, TransformationClass>, std::size_t> sizes;
  for (const auto& [key, members] : strata) sizes[key] = members.size();
  const auto quota = proportional_allocation(sizes, n);

  std::vector<bool> keep(instances.size(), false);
  for (const auto& [key, members] : strata) {
    Rng rng(seed, "sample/" + std::string(label_name(key.first)) + "/" +
                      std::string(class_file_name(key.second)));
    for (auto k : rng.sample_indices(members.size(), quota.at(key))) {
      keep[members[k]] = true;
    }
  }
  std::vector<GeneratedInstance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (keep[i]) out.push_back(instances[i]);
  }
  return out;
}

std::size_t BreakerSubmission::reviewed_count() const {
  std::size_t n = 0;
  for (const auto& g : submitted) n += acceptance.count(g.instance.id);
  return n;
}

std::size_t BreakerSubmission::accepted_count() const {
  std::size_t n = 0;
  for (const auto& g : submitted) n += is_accepted(g.instance.id) ? 1 : 0;
  return n;
}

bool BreakerSubmission::review_complete() const {
  return reviewed_count() == submitted.size();
}

std::optional<double> BreakerSubmission::acceptance_rate() const {
  if (submitted.empty() || !review_complete()) return std::nullopt;
  return static_cast<double>(accepted_count()) /
         static_cast<double>(submitted.size());
}

bool BreakerSubmission::is_accepted(const std::string& instance_id) const {
  auto it = acceptance.find(instance_id);
  return it != acceptance.end() && it->second;
}

std::vector<LabeledPrediction> accepted_predictions(
    const SystemEntry& system, const BreakerSubmission& breaker) {
  auto entry = system.predictions.find(breaker.breaker_id);
  if (entry == system.predictions.end()) {
    throw Error("system \"" + system.system_id +
                "\" has no predictions for breaker \"" + breaker.breaker_id +
                "\"");
  }
  std::unordered_map<std::string_view, const LabeledPrediction*> by_id;
  for (const auto& lp : entry->second) by_id.emplace(lp.gold.id, &lp);

  std::vector<LabeledPrediction> out;
  std::size_t missing = 0;
  std::string first_missing;
  for (const auto& g : breaker.submitted) {
    if (!breaker.is_accepted(g.instance.id)) continue;
    auto it = by_id.find(g.instance.id);
    if (it == by_id.end()) {
      if (missing++ == 0) first_missing = g.instance.id;
      continue;
    }
    out.push_back(*it->second);
  }
  if (missing != 0) {
    throw Error("system \"" + system.system_id + "\" is missing " +
                std::to_string(missing) +
                " prediction(s) for accepted instances of breaker \"" +
                breaker.breaker_id + "\" (first: \"" + first_missing + "\")");
  }
  return out;
}

double potency(const std::vector<SystemEntry>& systems,
               const BreakerSubmission& breaker, const ScoreOptions& options) {
  if (systems.empty()) throw Error("potency needs at least one system");
  if (breaker.accepted_count() == 0) {
    throw Error("breaker \"" + breaker.breaker_id +
                "\" has no accepted instances to score");
  }
  double error_sum = 0.0;
  for (const auto& system : systems) {
    error_sum += 1.0 - fever_score(accepted_predictions(system, breaker),
                                   options).fever_score;
  }
  return error_sum / static_cast<double>(systems.size());
}

double adjusted_potency(double potency, double acceptance_rate) {
  return acceptance_rate * potency;
}

double adjusted_potency(const std::vector<SystemEntry>& systems,
                        const BreakerSubmission& breaker,
                        const ScoreOptions& options) {
  const auto rate = breaker.acceptance_rate();
  if (!rate) {
    throw Error("breaker \"" + breaker.breaker_id + "\" has " +
                std::to_string(breaker.submitted.size() -
                               breaker.reviewed_count()) +
                " unreviewed instance(s)");
  }
  if (*rate == 0.0) return 0.0;
  return adjusted_potency(potency(systems, breaker, options), *rate);
}

double resilience(const SystemEntry& system,
                  const std::vector<BreakerSubmission>& breakers,
                  const ScoreOptions& options) {
  std::vector<LabeledPrediction> pooled;
  for (const auto& breaker : breakers) {
    if (breaker.accepted_count() == 0) continue;
    auto part = accepted_predictions(system, breaker);
    pooled.insert(pooled.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
  }
  if (pooled.empty()) {
    throw Error("system \"" + system.system_id +
                "\" has no accepted instances to score");
  }
  return fever_score(pooled, options).fever_score;
}

void rank_breakers(std::vector<BreakerRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const BreakerRow& a, const BreakerRow& b) {
              if (a.adjusted_potency.has_value() !=
                  b.adjusted_potency.has_value()) {
                return a.adjusted_potency.has_value();
              }
              if (a.adjusted_potency && *a.adjusted_potency != *b.adjusted_potency) {
                return *a.adjusted_potency > *b.adjusted_potency;
              }
              return a.breaker_id < b.breaker_id;
            });
}

void rank_systems(std::vector<SystemRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const SystemRow& a, const SystemRow& b) {
              if (a.resilience.has_value() != b.resilience.has_value()) {
                return a.resilience.has_value();
              }
              if (a.resilience && *a.resilience != *b.resilience) {
                return *a.resilience > *b.resilience;
              }
              return a.system_id < b.system_id;
            });
}

std::vector<BreakerRow> breaker_leaderboard(
    const std::vector<SystemEntry>& systems,
    const std::vector<BreakerSubmission>& breakers,
    const ScoreOptions& options) {
  std::vector<BreakerRow> rows;
  for (const auto& breaker : breakers) {
    BreakerRow row;
    row.breaker_id = breaker.breaker_id;
    row.submitted = breaker.submitted.size();
    row.reviewed = breaker.reviewed_count();
    row.accepted = breaker.accepted_count();
    row.acceptance_rate = breaker.acceptance_rate();
    if (row.accepted > 0) row.potency = potency(systems, breaker, options);
    if (row.acceptance_rate) {
      row.adjusted_potency =
          row.potency ? adjusted_potency(*row.potency, *row.acceptance_rate)
                      : 0.0;
    }
    rows.push_back(std::move(row));
  }
  rank_breakers(rows);
  return rows;
}

std::vector<SystemRow> system_leaderboard(
    const std::vector<SystemEntry>& systems,
    const std::vector<BreakerSubmission>& breakers,
    const ScoreOptions& options) {
  std::vector<SystemRow> rows;
  for (const auto& system : systems) {
    SystemRow row;
    row.system_id = system.system_id;
    for (const auto& breaker : breakers) row.scored += breaker.accepted_count();
    if (row.scored > 0) row.resilience = resilience(system, breakers, options);
    rows.push_back(std::move(row));
  }
  rank_systems(rows);
  return rows;
}

void write_manifest(std::ostream& out, const std::string& breaker_id,
                    const std::vector<GeneratedInstance>& instances) {
  json header = {{"type", "header"},
                 {"breaker_id", breaker_id},
                 {"size", instances.size()}};
  out << header.dump() << '\n';
  for (const auto& g : instances) out << generated_to_json(g) << '\n';
}

BreakerSubmission parse_manifest(std::istream& in,
                                 const std::string& source_name) {
  std::string header_line;
  std::size_t line_number = 0;
  while (std::getline(in, header_line)) {
    ++line_number;
    if (header_line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  BreakerSubmission submission;
  try {
    const json header = json::parse(header_line);
    if (!header.is_object() || header.value("type", "") != "header" ||
        !header.contains("breaker_id") || !header.at("breaker_id").is_string()) {
      throw Error("first record must be a header with a breaker_id");
    }
    submission.breaker_id = header.at("breaker_id").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(source_name, line_number, e.what());
  } catch (const Error& e) {
    throw ParseError(source_name, line_number, e.what());
  }
  // Keep line numbers meaningful for the body by padding with blank lines.
  std::string body(line_number, '\n');
  body.append(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  std::istringstream rest(body);
  submission.submitted = parse_generated(rest, source_name);
  return submission;
}

BreakerSubmission load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_manifest(in, path.string());
}

std::vector<Instance> instances_of(
    const std::vector<GeneratedInstance>& generated) {
  std::vector<Instance> out;
  out.reserve(generated.size());
  for (const auto& g : generated) out.push_back(g.instance);
  return out;
}

}  // namespace fever_forge
