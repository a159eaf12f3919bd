#include "fever_forge/review_server.hpp"

#include <charconv>

#include "httplib.h"
#include "json.hpp"

namespace fever_forge {

using nlohmann::json;

namespace {

json item_json(const ReviewItem& item) {
  return {{"instance_id", item.instance_id},
          {"claim", item.claim},
          {"source_claim", item.source_claim},
          {"rule_id", item.rule_id},
          {"class", class_file_name(item.cls)},
          {"label", label_name(item.label)},
          {"status", status_name(item.status)},
          {"rejection_reason",
           item.rejection_reason ? json(*item.rejection_reason) : json()},
          {"in_queue", item.in_queue}};
}

json optional_number(const std::optional<double>& value) {
  return value ? json(*value) : json();
}

json progress_json(const ReviewProgress& p) {
  return {{"total", p.total},
          {"pending", p.pending},
          {"accepted", p.accepted},
          {"rejected", p.rejected},
          {"r_accept", optional_number(p.acceptance_rate)},
          {"projected_r_accept", p.projected_acceptance_rate},
          {"estimate", p.estimate},
          {"queue_total", p.queue_total},
          {"queue_pending", p.queue_pending}};
}

ReviewServer::Response error(int status, const std::string& message) {
  return {status, json{{"error", message}}.dump()};
}

ReviewServer::Response ok(const json& body) { return {200, body.dump()}; }

const std::string* find(const std::map<std::string, std::string>& query,
                        const char* key) {
  auto it = query.find(key);
  return it == query.end() || it->second.empty() ? nullptr : &it->second;
}

}  // namespace

struct ReviewServer::Http {
  httplib::Server server;
};

ReviewServer::ReviewServer(ReviewStore& store,
                           std::vector<SystemEntry> preview_systems,
                           std::shared_ptr<const WikiSnapshot> snapshot,
                           ScoreOptions options)
    : store_(store),
      systems_(std::move(preview_systems)),
      snapshot_(std::move(snapshot)),
      options_(options) {}

ReviewServer::~ReviewServer() { stop(); }

ReviewServer::Response ReviewServer::handle(
    std::string_view method, std::string_view path,
    const std::map<std::string, std::string>& query,
    std::string_view body) const {
  try {
    if (method == "GET" && path == "/items") return list_items(query);
    if (method == "GET" && path == "/progress") return progress();
    if (method == "GET" && path == "/leaderboard/preview") return preview();
    constexpr std::string_view kItems = "/items/";
    if (path.substr(0, kItems.size()) == kItems) {
      const std::string_view rest = path.substr(kItems.size());
      const auto slash = rest.rfind('/');
      if (slash != std::string_view::npos && slash > 0) {
        const std::string id(rest.substr(0, slash));
        const std::string_view action = rest.substr(slash + 1);
        if (method == "POST" && action == "decision") return decide(id, body);
        if (method == "GET" && action == "evidence") return evidence(id);
      }
    }
    return error(404, "no route for " + std::string(method) + " " +
                          std::string(path));
  } catch (const NotFound& e) {
    return error(404, e.what());
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

ReviewServer::Response ReviewServer::list_items(
    const std::map<std::string, std::string>& query) const {
  ReviewFilter filter;
  if (const auto* s = find(query, "status")) {
    filter.status = try_parse_status(*s);
    if (!filter.status) throw BadRequest("unknown status \"" + *s + "\"");
  }
  if (const auto* c = find(query, "class")) {
    filter.cls = try_parse_class(*c);
    if (!filter.cls) throw BadRequest("unknown class \"" + *c + "\"");
  }
  if (const auto* r = find(query, "rule_id")) filter.rule_id = *r;
  if (const auto* q = find(query, "queue")) filter.queue_only = *q == "1" || *q == "true";

  std::size_t limit = 50;
  if (const auto* l = find(query, "limit")) {
    const auto [ptr, ec] = std::from_chars(l->data(), l->data() + l->size(), limit);
    if (ec != std::errc() || ptr != l->data() + l->size() || limit == 0 ||
        limit > 1000) {
      throw BadRequest("limit must be an integer in [1, 1000]");
    }
  }
  std::optional<std::string> cursor;
  if (const auto* c = find(query, "cursor")) cursor = *c;

  const ReviewPage page = store_.list(filter, cursor, limit);
  json items = json::array();
  for (const auto& item : page.items) items.push_back(item_json(item));
  return ok({{"items", std::move(items)},
             {"next_cursor", page.next_cursor ? json(*page.next_cursor) : json()}});
}

ReviewServer::Response ReviewServer::decide(const std::string& id,
                                            std::string_view body) const {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error&) {
    throw BadRequest("request body is not JSON");
  }
  if (!request.is_object() || !request.contains("decision") ||
      !request.at("decision").is_string()) {
    throw BadRequest("body must carry a \"decision\" string");
  }
  const auto status = try_parse_status(request.at("decision").get<std::string>());
  if (!status || *status == ReviewStatus::kPending) {
    throw BadRequest("decision must be \"accepted\" or \"rejected\"");
  }
  std::optional<std::string> reason;
  if (request.contains("reason") && request.at("reason").is_string()) {
    reason = request.at("reason").get<std::string>();
  }
  const ReviewItem item = store_.decide(id, *status, std::move(reason));
  return ok({{"item", item_json(item)}, {"progress", progress_json(store_.progress())}});
}

ReviewServer::Response ReviewServer::evidence(const std::string& id) const {
  if (!snapshot_) throw NotFound("no wiki snapshot loaded");
  const auto submission = store_.submission();
  for (const auto& g : submission.submitted) {
    if (g.instance.id != id) continue;
    json groups = json::array();
    for (const auto& combination : g.instance.evidence) {
      json group = json::array();
      for (const auto& sid : combination.sentences) {
        const std::string* text = snapshot_->find(sid);
        group.push_back({{"page", sid.page},
                         {"line", sid.line},
                         {"text", text ? json(*text) : json()}});
      }
      groups.push_back(std::move(group));
    }
    return ok({{"instance_id", id}, {"evidence", std::move(groups)}});
  }
  throw NotFound("no review item \"" + id + "\"");
}

ReviewServer::Response ReviewServer::progress() const {
  return ok(progress_json(store_.progress()));
}

ReviewServer::Response ReviewServer::preview() const {
  const ReviewProgress p = store_.progress();
  const BreakerSubmission submission = store_.submission();
  std::optional<double> potency_value;
  json systems = json::array();
  if (!systems_.empty() && submission.accepted_count() > 0) {
    potency_value = potency(systems_, submission, options_);
    for (const auto& system : systems_) {
      const auto report =
          fever_score(accepted_predictions(system, submission), options_);
      systems.push_back({{"system_id", system.system_id},
                         {"fever_score", report.fever_score},
                         {"n", report.n}});
    }
  }
  const std::optional<double> rate =
      p.estimate ? std::optional<double>(p.projected_acceptance_rate)
                 : p.acceptance_rate;
  std::optional<double> adjusted;
  if (rate && potency_value) adjusted = adjusted_potency(*potency_value, *rate);
  if (rate && *rate == 0.0) adjusted = 0.0;
  return ok({{"breaker_id", store_.breaker_id()},
             {"potency", optional_number(potency_value)},
             {"acceptance_rate", optional_number(rate)},
             {"adjusted_potency", optional_number(adjusted)},
             {"complete", p.pending == 0},
             {"estimate", p.estimate || p.pending != 0},
             {"systems", std::move(systems)}});
}

int ReviewServer::bind(const std::string& host, int port) {
  http_ = std::make_unique<Http>();
  auto& server = http_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [key, value] : req.params) query[key] = value;
    const Response out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(R"(/.*)", route);
  server.Post(R"(/.*)", route);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    http_.reset();
    throw Error("cannot bind " + host + ":" + std::to_string(port) +
                " (address in use?)");
  }
  return bound;
}

void ReviewServer::listen_after_bind() {
  if (!http_) throw Error("listen_after_bind() called before bind()");
  http_->server.listen_after_bind();
}

void ReviewServer::stop() {
  if (http_) http_->server.stop();
}

}  // namespace fever_forge
