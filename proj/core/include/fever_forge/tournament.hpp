#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fever_forge/corpus.hpp"
#include "fever_forge/rules.hpp"
#include "fever_forge/scorer.hpp"

namespace fever_forge {

// Discards instances at random from the majority labels until every label
// present has the minority count. Survivors keep their input order.
std::vector<GeneratedInstance> balance_classes(
    const std::vector<GeneratedInstance>& instances, std::uint64_t seed);

// Stratifies on (label, class), allocates n proportionally with
// largest-remainder rounding and draws within each stratum from its own
// substream. Output keeps input order. Throws Error when n > size.
std::vector<GeneratedInstance> stratified_sample(
    const std::vector<GeneratedInstance>& instances, std::size_t n,
    std::uint64_t seed);

// Per-stratum allocation used by stratified_sample, keyed by (label, class).
std::map<std::pair<Label, TransformationClass>, std::size_t>
proportional_allocation(
    const std::map<std::pair<Label, TransformationClass>, std::size_t>& sizes,
    std::size_t n);

struct BreakerSubmission {
  std::string breaker_id;
  std::vector<GeneratedInstance> submitted;
  // instance id -> accepted?  Absent means not yet reviewed.
  std::map<std::string, bool> acceptance;

  std::size_t reviewed_count() const;
  std::size_t accepted_count() const;
  bool review_complete() const;
  // |accepted| / |submitted|, only once every instance is reviewed.
  std::optional<double> acceptance_rate() const;
  bool is_accepted(const std::string& instance_id) const;
};

struct SystemEntry {
  std::string system_id;
  // breaker id -> predictions joined to that breaker's instances
  std::map<std::string, std::vector<LabeledPrediction>> predictions;
};

// The system's predictions restricted to the breaker's accepted instances, in
// submission order. Throws Error naming (system, breaker) when any accepted
// instance lacks a prediction.
std::vector<LabeledPrediction> accepted_predictions(
    const SystemEntry& system, const BreakerSubmission& breaker);

// Mean error rate (1 - FEVER) over systems, on accepted instances.
double potency(const std::vector<SystemEntry>& systems,
               const BreakerSubmission& breaker,
               const ScoreOptions& options = {});

double adjusted_potency(double potency, double acceptance_rate);

// Throws Error while any instance is unreviewed.
double adjusted_potency(const std::vector<SystemEntry>& systems,
                        const BreakerSubmission& breaker,
                        const ScoreOptions& options = {});

// FEVER score over the pooled accepted predictions of every breaker.
double resilience(const SystemEntry& system,
                  const std::vector<BreakerSubmission>& breakers,
                  const ScoreOptions& options = {});

struct BreakerRow {
  std::string breaker_id;
  std::optional<double> potency;           // absent: nothing accepted yet
  std::optional<double> acceptance_rate;   // absent: review incomplete
  std::optional<double> adjusted_potency;  // absent: pending
  std::size_t submitted = 0;
  std::size_t reviewed = 0;
  std::size_t accepted = 0;
};

struct SystemRow {
  std::string system_id;
  std::optional<double> resilience;
  std::size_t scored = 0;
};

// Adjusted potency descending, then breaker id. Pending rows sort last.
void rank_breakers(std::vector<BreakerRow>& rows);
// Resilience descending, then system id. Unscored rows sort last.
void rank_systems(std::vector<SystemRow>& rows);

std::vector<BreakerRow> breaker_leaderboard(
    const std::vector<SystemEntry>& systems,
    const std::vector<BreakerSubmission>& breakers,
    const ScoreOptions& options = {});

std::vector<SystemRow> system_leaderboard(
    const std::vector<SystemEntry>& systems,
    const std::vector<BreakerSubmission>& breakers,
    const ScoreOptions& options = {});

// Submission manifest: a header line {"type":"header","breaker_id":...,
// "size":N} followed by generated-instance records.
void write_manifest(std::ostream& out, const std::string& breaker_id,
                    const std::vector<GeneratedInstance>& instances);
BreakerSubmission parse_manifest(std::istream& in,
                                 const std::string& source_name);
BreakerSubmission load_manifest(const std::filesystem::path& path);

std::vector<Instance> instances_of(
    const std::vector<GeneratedInstance>& generated);

}  // namespace fever_forge
