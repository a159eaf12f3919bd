#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fever_forge::cli {

struct NamedPath {
  std::string name;
  std::filesystem::path path;
};

// Everything a subcommand may read. Paths that are set are checked for
// existence before any work starts; one seed feeds every stochastic step.
struct RunConfig {
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> generated;
  std::optional<std::filesystem::path> rules;
  std::optional<std::filesystem::path> wiki;
  std::optional<std::filesystem::path> before;
  std::optional<std::filesystem::path> after;
  std::vector<NamedPath> predictions;  // name=path (tournament: system@breaker)
  std::vector<std::filesystem::path> manifests;
  std::vector<NamedPath> decisions;  // breaker=path
  std::filesystem::path out = "out";
  std::optional<std::filesystem::path> output;  // predict: explicit file
  std::uint64_t seed = 0;
  std::size_t max_evidence = 5;
  std::optional<std::size_t> n;
  std::size_t top = 20;
  std::string breaker_id = "rule-based";
  std::string mode = "oracle";  // predict: oracle | retrieved
  std::size_t pages = 5;
  std::size_t sentences = 5;
  std::size_t nei_sentences = 5;
  std::optional<double> review_fraction;
  std::string addr = "127.0.0.1:8080";
};

// Splits "name=path"; throws Error when '=' is missing or either side empty.
NamedPath parse_named_path(const std::string& text);

// Output directory from $FEVER_FORGE_OUT, else "out".
std::filesystem::path default_out_dir();

// Default rule file shipped with the repository.
std::filesystem::path default_rules_path();

// Each command returns the process exit status: 0 on success (warnings go to
// `err` and never change it), 1 when an error fired.
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_score(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_tournament(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_analyze_bigrams(const RunConfig& config, std::ostream& out,
                        std::ostream& err);
int cmd_sample(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err);
// Blocks until the process is interrupted.
int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace fever_forge::cli
