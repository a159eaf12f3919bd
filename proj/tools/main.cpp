#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fever_forge/error.hpp"

namespace cli = fever_forge::cli;

namespace {

struct RawArgs {
  std::vector<std::string> predictions;
  std::vector<std::string> decisions;
  std::string out;
};

void add_common(CLI::App* app, cli::RunConfig& config, RawArgs& raw) {
  app->add_option("--out", raw.out, "Output directory (default $FEVER_FORGE_OUT or ./out)");
  app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app->add_option("--max-evidence", config.max_evidence,
                  "Predicted evidence truncation, 0 disables")
      ->capture_default_str();
}

void add_predictions(CLI::App* app, RawArgs& raw, const std::string& help) {
  app->add_option("--predictions", raw.predictions, help)->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based adversarial claim generation and build-it/break-it scoring"};
  app.require_subcommand(1);
  cli::RunConfig config;
  RawArgs raw;

  auto* generate = app.add_subcommand("generate", "Apply rewrite rules to a dataset");
  generate->add_option("--dataset", config.dataset, "Source claims (JSONL)")->required();
  generate->add_option("--rules", config.rules, "Rule file (JSONL)");
  add_common(generate, config, raw);

  auto* score = app.add_subcommand("score", "FEVER score, label accuracy, evidence P/R/F1");
  score->add_option("--dataset", config.dataset, "Gold instances (JSONL)");
  score->add_option("--generated", config.generated, "Generated instances with provenance");
  add_predictions(score, raw, "Predictions as name=path (repeatable)");
  score->add_option("--before", config.before, "Predictions on the matched source instances");
  score->add_option("--after", config.after, "Predictions on the generated instances");
  add_common(score, config, raw);

  auto* tournament = app.add_subcommand("tournament", "Breaker and builder leaderboards");
  tournament->add_option("--manifest", config.manifests, "Breaker submission manifest")
      ->take_all();
  tournament->add_option("--decisions", raw.decisions, "Review log as breaker=path")
      ->take_all();
  add_predictions(tournament, raw, "Predictions as system@breaker=path (repeatable)");
  add_common(tournament, config, raw);

  auto* bigrams = app.add_subcommand("analyze-bigrams", "Most frequent claim bigrams");
  bigrams->add_option("--dataset", config.dataset, "Claims (JSONL)")->required();
  bigrams->add_option("--top", config.top, "Number of bigrams to report")
      ->capture_default_str();
  add_common(bigrams, config, raw);

  auto* sample = app.add_subcommand("sample", "Balance labels and draw a stratified sample");
  sample->add_option("--generated", config.generated, "Generated instances (JSONL)");
  sample->add_option("--dataset", config.dataset, "Alias for --generated");
  sample->add_option("--n", config.n, "Sample size (default: whole balanced set)");
  sample->add_option("--breaker-id", config.breaker_id, "Breaker id written to the manifest")
      ->capture_default_str();
  add_common(sample, config, raw);

  auto* predict = app.add_subcommand("predict", "Run the TF-IDF baseline system");
  predict->add_option("--dataset", config.dataset, "Instances to predict (JSONL)");
  predict->add_option("--generated", config.generated, "Alias for --dataset");
  predict->add_option("--wiki", config.wiki, "Wikipedia snapshot (file or directory)")
      ->required();
  predict->add_option("--mode", config.mode, "oracle or retrieved")
      ->check(CLI::IsMember({"oracle", "retrieved"}))
      ->capture_default_str();
  predict->add_option("--pages", config.pages, "Pages retrieved per claim")
      ->capture_default_str();
  predict->add_option("--sentences", config.sentences, "Sentences kept per claim")
      ->capture_default_str();
  predict->add_option("--nei-sentences", config.nei_sentences,
                      "Sentences sampled for NOT ENOUGH INFO evidence")
      ->capture_default_str();
  predict->add_option("--output", config.output, "Output file (default <out>/predictions.jsonl)");
  add_common(predict, config, raw);

  auto* serve = app.add_subcommand("serve", "Serve the review API for one submission");
  serve->add_option("--manifest", config.manifests, "Breaker submission manifest")
      ->required();
  serve->add_option("--addr", config.addr, "host:port (port 0 picks a free port)")
      ->capture_default_str();
  serve->add_option("--wiki", config.wiki, "Snapshot used for evidence display");
  add_predictions(serve, raw, "Predictions for the leaderboard preview (name=path)");
  serve->add_option("--review-fraction", config.review_fraction,
                    "Review only a stratified fraction and estimate the acceptance rate")
      ->check(CLI::Range(0.0, 1.0));
  add_common(serve, config, raw);

  CLI11_PARSE(app, argc, argv);

  try {
    config.out = raw.out.empty() ? cli::default_out_dir() : std::filesystem::path(raw.out);
    for (const auto& text : raw.predictions) {
      config.predictions.push_back(cli::parse_named_path(text));
    }
    for (const auto& text : raw.decisions) {
      config.decisions.push_back(cli::parse_named_path(text));
    }
  } catch (const fever_forge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (generate->parsed()) return cli::cmd_generate(config, std::cout, std::cerr);
  if (score->parsed()) return cli::cmd_score(config, std::cout, std::cerr);
  if (tournament->parsed()) return cli::cmd_tournament(config, std::cout, std::cerr);
  if (bigrams->parsed()) return cli::cmd_analyze_bigrams(config, std::cout, std::cerr);
  if (sample->parsed()) return cli::cmd_sample(config, std::cout, std::cerr);
  if (predict->parsed()) return cli::cmd_predict(config, std::cout, std::cerr);
  return cli::cmd_serve(config, std::cout, std::cerr);
}
