#include "commands.hpp"

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "fever_forge/baseline.hpp"
#include "fever_forge/bigrams.hpp"
#include "fever_forge/corpus.hpp"
#include "fever_forge/error.hpp"
#include "fever_forge/report.hpp"
#include "fever_forge/review.hpp"
#include "fever_forge/review_server.hpp"
#include "fever_forge/rules.hpp"
#include "fever_forge/scorer.hpp"
#include "fever_forge/tournament.hpp"
#include "json.hpp"

namespace fever_forge::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using Align = TextTable::Align;

namespace {

void require_exists(const fs::path& path, const std::string& flag) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw Error(flag + ": no such file or directory: " + path.string());
  }
}

void validate_paths(const RunConfig& config) {
  auto check = [](const std::optional<fs::path>& path, const char* flag) {
    if (path) require_exists(*path, flag);
  };
  check(config.dataset, "--dataset");
  check(config.generated, "--generated");
  check(config.rules, "--rules");
  check(config.wiki, "--wiki");
  check(config.before, "--before");
  check(config.after, "--after");
  for (const auto& p : config.predictions) require_exists(p.path, "--predictions");
  for (const auto& m : config.manifests) require_exists(m, "--manifest");
  for (const auto& d : config.decisions) require_exists(d.path, "--decisions");
}

template <typename T>
const T& require(const std::optional<T>& value, const char* flag,
                 const char* command) {
  if (!value) throw Error(std::string(command) + " needs " + flag);
  return *value;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

// Scoring a subset would inflate the score, so every gold instance needs a
// prediction.
std::vector<LabeledPrediction> load_complete(const fs::path& path,
                                             const std::vector<Instance>& gold) {
  auto joined = load_predictions(path, gold);
  if (joined.size() != gold.size()) {
    throw Error(path.string() + " has predictions for " +
                std::to_string(joined.size()) + " of " +
                std::to_string(gold.size()) + " instances");
  }
  return joined;
}

// A system usually predicts every generated instance while a manifest holds
// only a sample, so predictions outside the submission are dropped.
std::vector<LabeledPrediction> load_for_submission(
    const fs::path& path, const std::vector<Instance>& instances) {
  std::set<std::string, std::less<>> ids;
  for (const auto& instance : instances) ids.insert(instance.id);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  auto predictions = parse_predictions(in, path.string());
  std::erase_if(predictions, [&](const Prediction& p) {
    return ids.count(p.instance_id) == 0;
  });
  return join_predictions(predictions, instances);
}

std::string to_jsonl(const std::vector<Instance>& instances) {
  std::ostringstream out;
  write_dataset(out, instances);
  return out.str();
}

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json();
}

json score_json(const ScoreReport& r) {
  return {{"fever_score", r.fever_score},
          {"label_accuracy", r.label_accuracy},
          {"n", r.n},
          {"instance_correct", r.instance_correct},
          {"label_correct", r.label_correct}};
}

json evidence_json(const EvidenceReport& r) {
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"true_positives", r.true_positives},
          {"predicted", r.predicted},
          {"gold", r.gold},
          {"instances", r.instances}};
}

json breakdown_json(const std::vector<BreakdownRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json entry = {{"class", bucket_name(row.bucket)}, {"after", score_json(row.after)}};
    if (row.before) {
      entry["before"] = score_json(*row.before);
      entry["delta"] = {{"label_accuracy", row.accuracy_delta()},
                        {"fever_score", row.fever_delta()}};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string breakdown_text(const std::vector<BreakdownRow>& rows) {
  TextTable table({"Transformation", "Acc Before", "Acc After", "Acc Delta",
                   "FEVER Before", "FEVER After", "FEVER Delta"},
                  {Align::kLeft, Align::kRight, Align::kRight, Align::kRight,
                   Align::kRight, Align::kRight, Align::kRight});
  for (const auto& row : rows) {
    const bool b = row.before.has_value();
    table.add_row({bucket_name(row.bucket),
                   b ? format_percent(row.before->label_accuracy) : "-",
                   format_percent(row.after.label_accuracy),
                   b ? format_delta(row.accuracy_delta()) : "-",
                   b ? format_percent(row.before->fever_score) : "-",
                   format_percent(row.after.fever_score),
                   b ? format_delta(row.fever_delta()) : "-"});
  }
  return table.render();
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::map<std::string, std::size_t> label_counts(
    const std::vector<GeneratedInstance>& instances) {
  std::map<std::string, std::size_t> counts;
  for (const auto& g : instances) ++counts[std::string(label_name(g.instance.label))];
  return counts;
}

std::map<std::string, std::size_t> class_counts(
    const std::vector<GeneratedInstance>& instances) {
  std::map<std::string, std::size_t> counts;
  for (auto cls : kAllTransformationClasses) counts[std::string(class_file_name(cls))] = 0;
  for (const auto& g : instances) ++counts[std::string(class_file_name(g.cls))];
  return counts;
}

}  // namespace

NamedPath parse_named_path(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw Error("expected name=path, got \"" + text + "\"");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("FEVER_FORGE_OUT"); env && *env) return env;
  return "out";
}

fs::path default_rules_path() {
#ifdef FEVER_FORGE_DEFAULT_RULES
  return FEVER_FORGE_DEFAULT_RULES;
#else
  return "data/rules/default_rules.jsonl";
#endif
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    const fs::path rules_path = config.rules.value_or(default_rules_path());
    require_exists(rules_path, "--rules");
    const auto& dataset_path = require(config.dataset, "--dataset", "generate");

    const RuleSet rules = parse_ruleset(rules_path);
    if (rules.empty()) throw Error("no rules loaded from " + rules_path.string());
    Warnings warnings;
    const auto dataset = load_dataset(dataset_path, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';

    const GenerationResult result = generate_adversarial_dataset(rules, dataset);

    std::ostringstream generated;
    for (const auto& g : result.generated) generated << generated_to_json(g) << '\n';

    std::map<std::string, std::size_t> firings;
    for (const auto& g : result.generated) ++firings[g.rule_id];
    json per_rule = json::array();
    for (const auto& rule : rules.rules()) {
      per_rule.push_back({{"rule_id", rule.rule_id},
                          {"class", class_file_name(rule.cls)},
                          {"count", firings[rule.rule_id]}});
    }
    json ruleset_classes = json::object();
    for (const auto& [cls, count] : rules.class_counts()) {
      ruleset_classes[std::string(class_file_name(cls))] = count;
    }
    json report = {{"rules", rules.size()},
                   {"ruleset_classes", ruleset_classes},
                   {"source_instances", dataset.size()},
                   {"matched", result.matched.size()},
                   {"generated", result.generated.size()},
                   {"generated_by_class", class_counts(result.generated)},
                   {"generated_by_label", label_counts(result.generated)},
                   {"rule_firings", per_rule}};

    write_file(config.out / "matched.jsonl", to_jsonl(result.matched));
    write_file(config.out / "generated.jsonl", generated.str());
    write_file(config.out / "generation_report.json", report.dump(2) + '\n');

    TextTable table({"Class", "Rules", "Generated"},
                    {Align::kLeft, Align::kRight, Align::kRight});
    const auto generated_classes = class_counts(result.generated);
    for (const auto& [cls, count] : rules.class_counts()) {
      const std::string name(class_file_name(cls));
      table.add_row({name, std::to_string(count),
                     std::to_string(generated_classes.at(name))});
    }
    out << rules.size() << " rules applied to " << dataset.size()
        << " instances: " << result.matched.size() << " matched, "
        << result.generated.size() << " generated\n"
        << table.render();
  });
}

int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    ScoreOptions options;
    options.max_evidence = config.max_evidence;

    std::optional<std::vector<Instance>> dataset;
    std::optional<std::vector<GeneratedInstance>> generated;
    if (config.dataset) dataset = load_dataset(*config.dataset);
    if (config.generated) generated = load_generated(*config.generated);
    std::optional<std::vector<Instance>> generated_gold;
    if (generated) generated_gold = instances_of(*generated);
    if (config.predictions.empty() && !config.before && !config.after) {
      throw Error("score needs --predictions or --before/--after");
    }

    json doc = {{"max_evidence", config.max_evidence}};
    std::string text;

    if (!config.predictions.empty()) {
      const std::vector<Instance>* gold =
          dataset ? &*dataset : (generated_gold ? &*generated_gold : nullptr);
      if (gold == nullptr) throw Error("--predictions needs --dataset or --generated");
      const bool with_provenance = !dataset && generated;
      json systems = json::array();
      TextTable table({"System", "N", "Accuracy", "FEVER", "Ev P", "Ev R", "Ev F1"},
                      {Align::kLeft, Align::kRight, Align::kRight, Align::kRight,
                       Align::kRight, Align::kRight, Align::kRight});
      std::string breakdowns;
      for (const auto& named : config.predictions) {
        const auto preds = load_complete(named.path, *gold);
        const auto report = fever_score(preds, options);
        const auto evidence = evidence_prf(preds, options);
        json entry = {{"system", named.name},
                      {"score", score_json(report)},
                      {"evidence", evidence_json(evidence)}};
        if (with_provenance) {
          const auto rows = breakdown_by_class(preds, provenance_of(*generated),
                                               std::map<Bucket, ScoreReport>{},
                                               options);
          entry["breakdown"] = breakdown_json(rows);
          breakdowns += "\n" + named.name + " by transformation class\n" +
                        breakdown_text(rows);
        }
        systems.push_back(std::move(entry));
        table.add_row({named.name, std::to_string(report.n),
                       format_percent(report.label_accuracy),
                       format_percent(report.fever_score),
                       format_percent(evidence.precision),
                       format_percent(evidence.recall),
                       format_percent(evidence.f1)});
      }
      doc["systems"] = std::move(systems);
      text += table.render() + breakdowns;
    }

    if (config.before || config.after) {
      if (!config.before || !config.after) {
        throw Error("--before and --after must be given together");
      }
      const auto& before_gold = require(dataset, "--dataset", "score --before");
      const auto& after_gold = require(generated_gold, "--generated", "score --after");
      const auto before = load_complete(*config.before, before_gold);
      const auto after = load_complete(*config.after, after_gold);
      const auto rb = fever_score(before, options);
      const auto ra = fever_score(after, options);
      const auto eb = evidence_prf(before, options);
      const auto ea = evidence_prf(after, options);
      const auto rows = breakdown_by_class(
          after, provenance_of(*generated),
          baseline_by_class(before, *generated, options), options);

      doc["before_after"] = {
          {"before", {{"score", score_json(rb)}, {"evidence", evidence_json(eb)}}},
          {"after", {{"score", score_json(ra)}, {"evidence", evidence_json(ea)}}},
          {"delta",
           {{"label_accuracy", ra.label_accuracy - rb.label_accuracy},
            {"fever_score", ra.fever_score - rb.fever_score},
            {"precision", ea.precision - eb.precision},
            {"recall", ea.recall - eb.recall},
            {"f1", ea.f1 - eb.f1}}},
          {"breakdown", breakdown_json(rows)}};

      TextTable summary({"Metric", "Before", "After", "Delta"},
                        {Align::kLeft, Align::kRight, Align::kRight, Align::kRight});
      auto add = [&](const char* name, double b, double a) {
        summary.add_row({name, format_percent(b), format_percent(a),
                         format_delta(a - b)});
      };
      add("Accuracy", rb.label_accuracy, ra.label_accuracy);
      add("FEVER Score", rb.fever_score, ra.fever_score);
      add("Evidence Precision", eb.precision, ea.precision);
      add("Evidence Recall", eb.recall, ea.recall);
      add("Evidence F1", eb.f1, ea.f1);
      if (!text.empty()) text += '\n';
      text += "Before: " + std::to_string(rb.n) + " instances, after: " +
              std::to_string(ra.n) + " instances\n" + summary.render() + '\n' +
              breakdown_text(rows);
    }

    write_file(config.out / "score.json", doc.dump(2) + '\n');
    write_file(config.out / "score.txt", text);
    out << text;
  });
}

int cmd_tournament(const RunConfig& config, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    if (config.manifests.empty()) throw Error("tournament needs at least one --manifest");
    if (config.predictions.empty()) {
      throw Error("tournament needs at least one --predictions system@breaker=path");
    }
    ScoreOptions options;
    options.max_evidence = config.max_evidence;

    std::vector<BreakerSubmission> breakers;
    std::map<std::string, std::size_t> breaker_index;
    for (const auto& path : config.manifests) {
      auto submission = load_manifest(path);
      if (!breaker_index.emplace(submission.breaker_id, breakers.size()).second) {
        throw Error("duplicate breaker id \"" + submission.breaker_id + "\"");
      }
      breakers.push_back(std::move(submission));
    }
    for (const auto& named : config.decisions) {
      auto it = breaker_index.find(named.name);
      if (it == breaker_index.end()) {
        throw Error("--decisions names unknown breaker \"" + named.name + "\"");
      }
      breakers[it->second].acceptance = acceptance_from_log(load_decision_log(named.path));
    }

    std::map<std::string, SystemEntry> systems;
    for (const auto& named : config.predictions) {
      const auto at = named.name.rfind('@');
      if (at == std::string::npos || at == 0 || at + 1 == named.name.size()) {
        throw Error("tournament predictions must be named system@breaker, got \"" +
                    named.name + "\"");
      }
      const std::string system_id = named.name.substr(0, at);
      const std::string breaker_id = named.name.substr(at + 1);
      auto it = breaker_index.find(breaker_id);
      if (it == breaker_index.end()) {
        throw Error("predictions name unknown breaker \"" + breaker_id + "\"");
      }
      auto& entry = systems[system_id];
      entry.system_id = system_id;
      if (entry.predictions.count(breaker_id) != 0) {
        throw Error("duplicate predictions for " + named.name);
      }
      entry.predictions[breaker_id] =
          load_for_submission(named.path, instances_of(breakers[it->second].submitted));
    }
    std::vector<SystemEntry> system_list;
    for (auto& [id, entry] : systems) system_list.push_back(std::move(entry));

    for (const auto& b : breakers) {
      if (!b.review_complete()) {
        err << "warning: breaker \"" << b.breaker_id << "\": "
            << b.submitted.size() - b.reviewed_count() << " of "
            << b.submitted.size()
            << " instances unreviewed; adjusted potency pending\n";
      }
    }

    const auto breaker_rows = breaker_leaderboard(system_list, breakers, options);
    const auto system_rows = system_leaderboard(system_list, breakers, options);

    json breakers_doc = json::array();
    TextTable breaker_table(
        {"Rank", "Method", "Potency (%)", "Accept Rate (%)", "Adjusted Potency (%)"},
        {Align::kRight, Align::kLeft, Align::kRight, Align::kRight, Align::kRight});
    for (std::size_t i = 0; i < breaker_rows.size(); ++i) {
      const auto& row = breaker_rows[i];
      const bool pending = !row.adjusted_potency.has_value();
      breakers_doc.push_back(
          {{"rank", i + 1},
           {"breaker_id", row.breaker_id},
           {"potency", optional_number(row.potency)},
           {"acceptance_rate", optional_number(row.acceptance_rate)},
           {"adjusted_potency", optional_number(row.adjusted_potency)},
           {"status", pending ? "pending" : "final"},
           {"submitted", row.submitted},
           {"reviewed", row.reviewed},
           {"accepted", row.accepted}});
      breaker_table.add_row(
          {std::to_string(i + 1), row.breaker_id,
           row.potency ? format_percent(*row.potency) : "pending",
           row.acceptance_rate ? format_percent(*row.acceptance_rate) : "pending",
           pending ? "pending" : format_percent(*row.adjusted_potency)});
    }

    json systems_doc = json::array();
    TextTable system_table({"Rank", "System", "Resilience (%)"},
                           {Align::kRight, Align::kLeft, Align::kRight});
    for (std::size_t i = 0; i < system_rows.size(); ++i) {
      const auto& row = system_rows[i];
      systems_doc.push_back({{"rank", i + 1},
                             {"system_id", row.system_id},
                             {"resilience", optional_number(row.resilience)},
                             {"scored", row.scored}});
      system_table.add_row({std::to_string(i + 1), row.system_id,
                            row.resilience ? format_percent(*row.resilience)
                                           : "pending"});
    }

    write_file(config.out / "breakers.json",
               json{{"breakers", breakers_doc}}.dump(2) + '\n');
    write_file(config.out / "systems.json",
               json{{"systems", systems_doc}}.dump(2) + '\n');
    write_file(config.out / "breakers.txt", breaker_table.render());
    write_file(config.out / "systems.txt", system_table.render());
    out << breaker_table.render() << '\n' << system_table.render();
  });
}

int cmd_analyze_bigrams(const RunConfig& config, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    const auto& path = require(config.dataset, "--dataset", "analyze-bigrams");
    const auto dataset = load_dataset(path);
    std::vector<std::string> claims;
    claims.reserve(dataset.size());
    for (const auto& instance : dataset) claims.push_back(instance.claim);
    const BigramTable table = bigram_frequencies(claims);

    json top = json::array();
    TextTable text({"Rank", "Bigram", "Count"},
                   {Align::kRight, Align::kLeft, Align::kRight});
    std::size_t rank = 0;
    for (const auto& row : table.top(config.top)) {
      ++rank;
      top.push_back({{"rank", rank},
                     {"first", row.first},
                     {"second", row.second},
                     {"count", row.count}});
      text.add_row({std::to_string(rank), row.first + " " + row.second,
                    std::to_string(row.count)});
    }
    json doc = {{"claims", claims.size()},
                {"total_bigrams", table.total()},
                {"distinct_bigrams", table.distinct()},
                {"top", std::move(top)}};
    write_file(config.out / "bigrams.json", doc.dump(2) + '\n');
    write_file(config.out / "bigrams.txt", text.render());
    out << text.render();
  });
}

int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    const auto path = config.generated ? *config.generated
                                       : require(config.dataset, "--generated",
                                                 "sample");
    const auto generated = load_generated(path);
    const auto balanced = balance_classes(generated, config.seed);
    const std::size_t n = config.n.value_or(balanced.size());
    if (n > balanced.size()) {
      throw Error("--n " + std::to_string(n) + " is not feasible: at most " +
                  std::to_string(balanced.size()) +
                  " instances remain after class balancing");
    }
    const auto sample = stratified_sample(balanced, n, config.seed);

    std::ostringstream manifest;
    write_manifest(manifest, config.breaker_id, sample);

    std::map<std::string, std::size_t> strata;
    for (const auto& g : sample) {
      ++strata[std::string(label_name(g.instance.label)) + "/" +
               std::string(class_file_name(g.cls))];
    }
    json report = {{"breaker_id", config.breaker_id},
                   {"seed", config.seed},
                   {"input", generated.size()},
                   {"input_by_label", label_counts(generated)},
                   {"balanced", balanced.size()},
                   {"balanced_by_label", label_counts(balanced)},
                   {"n", sample.size()},
                   {"sample_by_label", label_counts(sample)},
                   {"sample_by_class", class_counts(sample)},
                   {"sample_by_stratum", strata}};
    write_file(config.out / "submission.jsonl", manifest.str());
    write_file(config.out / "sample_report.json", report.dump(2) + '\n');
    out << "sampled " << sample.size() << " of " << balanced.size()
        << " balanced instances (" << generated.size() << " generated) for breaker \""
        << config.breaker_id << "\"\n";
  });
}

int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    const auto& wiki = require(config.wiki, "--wiki", "predict");
    const fs::path gold_path =
        config.dataset ? *config.dataset : require(config.generated, "--dataset", "predict");
    PipelineMode mode;
    if (config.mode == "oracle") {
      mode = PipelineMode::kOracle;
    } else if (config.mode == "retrieved") {
      mode = PipelineMode::kRetrieved;
    } else {
      throw Error("--mode must be oracle or retrieved");
    }
    const auto instances = load_dataset(gold_path);
    auto snapshot = std::make_shared<const WikiSnapshot>(load_wiki_snapshot(wiki));
    for (const auto& id : missing_evidence(*snapshot, instances)) {
      err << "warning: evidence " << to_string(id) << " not in snapshot\n";
    }
    PipelineConfig pipeline_config;
    pipeline_config.pages = config.pages;
    pipeline_config.sentences = config.sentences;
    pipeline_config.nei_sentences = config.nei_sentences;
    pipeline_config.seed = config.seed;
    auto pipeline = std::make_shared<const BaselinePipeline>(snapshot, pipeline_config);
    const auto adapter = SystemAdapter::baseline("baseline", pipeline);
    const auto joined = run_pipeline(adapter, instances, mode);

    std::ostringstream lines;
    for (const auto& lp : joined) lines << prediction_to_json(lp.pred) << '\n';
    const fs::path target = config.output.value_or(config.out / "predictions.jsonl");
    write_file(target, lines.str());

    ScoreOptions options;
    options.max_evidence = config.max_evidence;
    if (!joined.empty()) {
      const auto report = fever_score(joined, options);
      out << "wrote " << joined.size() << " predictions to " << target.string()
          << " (accuracy " << format_percent(report.label_accuracy)
          << ", FEVER " << format_percent(report.fever_score) << ")\n";
    }
  });
}

namespace {
ReviewServer* g_server = nullptr;
extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}
}  // namespace

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_paths(config);
    if (config.manifests.size() != 1) throw Error("serve needs exactly one --manifest");
    const auto colon = config.addr.rfind(':');
    if (colon == std::string::npos) throw Error("--addr must be host:port");
    const std::string host = config.addr.substr(0, colon);
    int port = 0;
    try {
      port = std::stoi(config.addr.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error("--addr port is not a number");
    }

    BreakerSubmission submission = load_manifest(config.manifests.front());
    std::vector<SystemEntry> systems;
    const auto instances = instances_of(submission.submitted);
    for (const auto& named : config.predictions) {
      SystemEntry entry;
      entry.system_id = named.name;
      entry.predictions[submission.breaker_id] = load_for_submission(named.path, instances);
      systems.push_back(std::move(entry));
    }
    std::shared_ptr<const WikiSnapshot> snapshot;
    if (config.wiki) {
      snapshot = std::make_shared<const WikiSnapshot>(load_wiki_snapshot(*config.wiki));
    }
    std::optional<ReviewSubset> subset;
    if (config.review_fraction) subset = ReviewSubset{*config.review_fraction, config.seed};

    ReviewStore store(std::move(submission), config.out / "decisions.jsonl", subset);
    ReviewServer server(store, std::move(systems), snapshot);
    const int bound = server.bind(host, port);
    const auto progress = store.progress();
    out << "reviewing breaker \"" << store.breaker_id() << "\": "
        << progress.total - progress.pending << " of " << progress.total
        << " reviewed; serving on http://" << host << ":" << bound << std::endl;

    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen_after_bind();
    g_server = nullptr;
  });
}

}  // namespace fever_forge::cli
