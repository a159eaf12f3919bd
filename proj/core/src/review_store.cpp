#include "fever_forge/review.hpp"

#include <cmath>
#include <sstream>

#include "fever_forge/random.hpp"
#include "json.hpp"

namespace fever_forge {

using nlohmann::json;

std::string_view status_name(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::kPending: return "pending";
    case ReviewStatus::kAccepted: return "accepted";
    case ReviewStatus::kRejected: return "rejected";
  }
  return "?";
}

std::optional<ReviewStatus> try_parse_status(std::string_view text) {
  if (text == "pending") return ReviewStatus::kPending;
  if (text == "accepted") return ReviewStatus::kAccepted;
  if (text == "rejected") return ReviewStatus::kRejected;
  return std::nullopt;
}

std::string decision_to_json(const Decision& decision) {
  json record = {{"seq", decision.seq},
                 {"instance_id", decision.instance_id},
                 {"decision", status_name(decision.status)},
                 {"reason", decision.reason ? json(*decision.reason) : json()}};
  return record.dump();
}

std::vector<Decision> parse_decision_log(std::istream& in,
                                         const std::string& source_name) {
  std::vector<Decision> log;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json record = json::parse(line);
      Decision d;
      d.seq = record.at("seq").get<std::uint64_t>();
      d.instance_id = record.at("instance_id").get<std::string>();
      const auto status =
          try_parse_status(record.at("decision").get<std::string>());
      if (!status || *status == ReviewStatus::kPending) {
        throw Error("decision must be \"accepted\" or \"rejected\"");
      }
      d.status = *status;
      if (record.contains("reason") && record.at("reason").is_string()) {
        d.reason = record.at("reason").get<std::string>();
      }
      log.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw ParseError(source_name, number, e.what());
    } catch (const Error& e) {
      throw ParseError(source_name, number, e.what());
    }
  }
  return log;
}

std::vector<Decision> load_decision_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_decision_log(in, path.string());
}

std::map<std::string, bool> acceptance_from_log(
    const std::vector<Decision>& log) {
  std::map<std::string, bool> out;
  for (const auto& d : log) out[d.instance_id] = d.status == ReviewStatus::kAccepted;
  return out;
}

ReviewStore::ReviewStore(BreakerSubmission submission,
                         std::filesystem::path log_path,
                         std::optional<ReviewSubset> subset)
    : submission_(std::move(submission)), log_path_(std::move(log_path)) {
  std::set<std::string> queue;
  if (subset) {
    if (subset->fraction <= 0.0 || subset->fraction > 1.0) {
      throw Error("review subset fraction must be in (0, 1]");
    }
    subset_mode_ = true;
    const auto n = static_cast<std::size_t>(std::llround(
        subset->fraction * static_cast<double>(submission_.submitted.size())));
    for (const auto& g : stratified_sample(
             submission_.submitted, n, subset->seed ^ fnv1a64("review-subset"))) {
      queue.insert(g.instance.id);
    }
  }

  std::vector<Decision> existing;
  if (!log_path_.empty() && std::filesystem::exists(log_path_)) {
    existing = load_decision_log(log_path_);
  }
  items_ = replay(submission_, existing);
  if (subset_mode_) {
    for (auto& [id, item] : items_) item.in_queue = queue.count(id) != 0;
  }
  log_ = std::move(existing);

  if (!log_path_.empty()) {
    if (log_path_.has_parent_path()) {
      std::filesystem::create_directories(log_path_.parent_path());
    }
    log_out_.open(log_path_, std::ios::app);
    if (!log_out_) throw Error("cannot open decision log " + log_path_.string());
  }
}

std::map<std::string, ReviewItem> ReviewStore::replay(
    const BreakerSubmission& submission, const std::vector<Decision>& log) {
  std::map<std::string, ReviewItem> items;
  for (const auto& g : submission.submitted) {
    ReviewItem item;
    item.instance_id = g.instance.id;
    item.claim = g.instance.claim;
    item.source_claim = g.source_claim;
    item.rule_id = g.rule_id;
    item.cls = g.cls;
    item.label = g.instance.label;
    if (!items.emplace(item.instance_id, std::move(item)).second) {
      throw Error("duplicate instance id \"" + g.instance.id +
                  "\" in submission");
    }
  }
  for (const auto& decision : log) apply(items, decision);
  return items;
}

void ReviewStore::apply(std::map<std::string, ReviewItem>& items,
                        const Decision& decision) {
  auto it = items.find(decision.instance_id);
  if (it == items.end()) {
    throw Error("decision log refers to unknown instance \"" +
                decision.instance_id + "\"");
  }
  if (decision.status == ReviewStatus::kPending) {
    throw Error("decision log cannot return an item to pending");
  }
  it->second.status = decision.status;
  it->second.rejection_reason = decision.status == ReviewStatus::kRejected
                                    ? decision.reason
                                    : std::nullopt;
}

ReviewPage ReviewStore::list(const ReviewFilter& filter,
                             const std::optional<std::string>& cursor,
                             std::size_t limit) const {
  std::shared_lock lock(mutex_);
  auto it = items_.begin();
  if (cursor) {
    it = items_.find(*cursor);
    if (it == items_.end()) throw BadRequest("invalid cursor \"" + *cursor + "\"");
    ++it;
  }
  ReviewPage page;
  for (; it != items_.end(); ++it) {
    const ReviewItem& item = it->second;
    if (filter.status && item.status != *filter.status) continue;
    if (filter.cls && item.cls != *filter.cls) continue;
    if (filter.rule_id && item.rule_id != *filter.rule_id) continue;
    if (filter.queue_only && !item.in_queue) continue;
    if (page.items.size() == limit) {
      page.next_cursor = page.items.back().instance_id;
      break;
    }
    page.items.push_back(item);
  }
  return page;
}

std::optional<ReviewItem> ReviewStore::item(const std::string& instance_id) const {
  std::shared_lock lock(mutex_);
  auto it = items_.find(instance_id);
  if (it == items_.end()) return std::nullopt;
  return it->second;
}

ReviewItem ReviewStore::decide(const std::string& instance_id,
                               ReviewStatus status,
                               std::optional<std::string> reason) {
  if (status == ReviewStatus::kPending) {
    throw BadRequest("a decision must be \"accepted\" or \"rejected\"");
  }
  if (status == ReviewStatus::kAccepted) reason.reset();

  std::unique_lock lock(mutex_);
  auto it = items_.find(instance_id);
  if (it == items_.end()) {
    throw NotFound("no review item \"" + instance_id + "\"");
  }
  if (it->second.status == status && it->second.rejection_reason == reason) {
    return it->second;
  }
  Decision decision{log_.size() + 1, instance_id, status, std::move(reason)};
  if (log_out_.is_open()) {
    log_out_ << decision_to_json(decision) << '\n';
    log_out_.flush();
    if (!log_out_) throw Error("failed to append to " + log_path_.string());
  }
  apply(items_, decision);
  log_.push_back(std::move(decision));
  return it->second;
}

ReviewProgress ReviewStore::progress() const {
  std::shared_lock lock(mutex_);
  return progress_locked();
}

ReviewProgress ReviewStore::progress_locked() const {
  ReviewProgress p;
  std::size_t queue_accepted = 0;
  std::size_t queue_reviewed = 0;
  for (const auto& [id, item] : items_) {
    ++p.total;
    switch (item.status) {
      case ReviewStatus::kPending: ++p.pending; break;
      case ReviewStatus::kAccepted: ++p.accepted; break;
      case ReviewStatus::kRejected: ++p.rejected; break;
    }
    if (item.in_queue) {
      ++p.queue_total;
      if (item.status == ReviewStatus::kPending) {
        ++p.queue_pending;
      } else {
        ++queue_reviewed;
        if (item.status == ReviewStatus::kAccepted) ++queue_accepted;
      }
    }
  }
  const std::size_t reviewed = p.accepted + p.rejected;
  if (reviewed > 0) {
    p.acceptance_rate =
        static_cast<double>(p.accepted) / static_cast<double>(reviewed);
  }
  if (subset_mode_) {
    p.estimate = true;
    p.projected_acceptance_rate =
        queue_reviewed > 0 ? static_cast<double>(queue_accepted) /
                                 static_cast<double>(queue_reviewed)
                           : 0.0;
  } else if (p.total > 0) {
    p.projected_acceptance_rate =
        static_cast<double>(p.accepted) / static_cast<double>(p.total);
  }
  return p;
}

std::vector<Decision> ReviewStore::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

BreakerSubmission ReviewStore::submission() const {
  std::shared_lock lock(mutex_);
  BreakerSubmission out = submission_;
  out.acceptance.clear();
  for (const auto& [id, item] : items_) {
    if (item.status != ReviewStatus::kPending) {
      out.acceptance[id] = item.status == ReviewStatus::kAccepted;
    }
  }
  return out;
}

}  // namespace fever_forge
