#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/error.hpp"
#include "fever_forge/rules.hpp"
#include "fever_forge/tournament.hpp"

namespace fever_forge {

enum class ReviewStatus { kPending, kAccepted, kRejected };

std::string_view status_name(ReviewStatus status);
std::optional<ReviewStatus> try_parse_status(std::string_view text);

struct ReviewItem {
  std::string instance_id;
  std::string claim;
  std::string source_claim;
  std::string rule_id;
  TransformationClass cls = TransformationClass::kEntailmentPreserving;
  Label label = Label::kNotEnoughInfo;
  ReviewStatus status = ReviewStatus::kPending;
  std::optional<std::string> rejection_reason;
  bool in_queue = true;  // false outside the review subset
};

// One line of the decision log.
struct Decision {
  std::uint64_t seq = 0;
  std::string instance_id;
  ReviewStatus status = ReviewStatus::kAccepted;  // never pending
  std::optional<std::string> reason;

  bool operator==(const Decision&) const = default;
};

std::string decision_to_json(const Decision& decision);
std::vector<Decision> parse_decision_log(std::istream& in,
                                         const std::string& source_name);
std::vector<Decision> load_decision_log(const std::filesystem::path& path);

// Folds a log into instance id -> accepted?, the shape the tournament uses.
std::map<std::string, bool> acceptance_from_log(
    const std::vector<Decision>& log);

struct ReviewProgress {
  std::size_t total = 0;
  std::size_t pending = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // accepted / (accepted + rejected); absent while nothing is reviewed.
  std::optional<double> acceptance_rate;
  // accepted / total, the final rate if every pending item were rejected.
  double projected_acceptance_rate = 0.0;
  // Review-subset mode: the rate is extrapolated from the subset.
  bool estimate = false;
  std::size_t queue_total = 0;
  std::size_t queue_pending = 0;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class BadRequest : public Error {
 public:
  using Error::Error;
};

struct ReviewFilter {
  std::optional<ReviewStatus> status;
  std::optional<TransformationClass> cls;
  std::optional<std::string> rule_id;
  bool queue_only = false;
};

struct ReviewPage {
  std::vector<ReviewItem> items;
  std::optional<std::string> next_cursor;
};

struct ReviewSubset {
  double fraction = 0.3;
  std::uint64_t seed = 0;
};

// Current review state for one submission. Reads may run concurrently;
// decisions are serialised by a single writer lock and each one is appended to
// the log before the in-memory state changes.
class ReviewStore {
 public:
  // Replays `log_path` when it exists and appends new decisions to it. An
  // empty path keeps the log in memory only.
  ReviewStore(BreakerSubmission submission, std::filesystem::path log_path = {},
              std::optional<ReviewSubset> subset = std::nullopt);

  ReviewStore(const ReviewStore&) = delete;
  ReviewStore& operator=(const ReviewStore&) = delete;

  const std::string& breaker_id() const { return submission_.breaker_id; }

  // Items in instance-id order after `cursor` (an instance id, exclusive).
  // Throws BadRequest on an unknown cursor.
  ReviewPage list(const ReviewFilter& filter,
                  const std::optional<std::string>& cursor,
                  std::size_t limit) const;

  std::optional<ReviewItem> item(const std::string& instance_id) const;

  // Throws NotFound on an unknown id and BadRequest for a pending decision.
  // Repeating the current decision is a no-op and is not logged.
  ReviewItem decide(const std::string& instance_id, ReviewStatus status,
                    std::optional<std::string> reason = std::nullopt);

  ReviewProgress progress() const;

  std::vector<Decision> log() const;

  // The submission with acceptance filled from the current state.
  BreakerSubmission submission() const;

  // Applies a log to fresh items; the materialised state of any log prefix.
  static std::map<std::string, ReviewItem> replay(
      const BreakerSubmission& submission, const std::vector<Decision>& log);

 private:
  static void apply(std::map<std::string, ReviewItem>& items,
                    const Decision& decision);
  ReviewProgress progress_locked() const;

  BreakerSubmission submission_;
  std::filesystem::path log_path_;
  std::ofstream log_out_;
  std::vector<Decision> log_;
  std::map<std::string, ReviewItem> items_;
  bool subset_mode_ = false;
  mutable std::shared_mutex mutex_;
};

}  // namespace fever_forge
