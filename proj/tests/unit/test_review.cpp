#include <algorithm>
#include <random>
#include <thread>

#include "doctest.h"
#include "fever_forge/review.hpp"
#include "fever_forge/review_server.hpp"
#include "fever_forge/tournament.hpp"
#include "httplib.h"
#include "json.hpp"
#include "support.hpp"
#include "tournament_fixture.hpp"

using namespace fever_forge;
using namespace fever_forge::testing;
using nlohmann::json;

namespace {

// Ten instances i0..i9 cycling through the three classes, nothing reviewed.
BreakerSubmission fresh_submission(std::size_t n = 10, const std::string& breaker = "b1") {
  BreakerSubmission s;
  s.breaker_id = breaker;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cls = kAllTransformationClasses[i % 3];
    auto g = make_generated("i" + std::to_string(i), Label::kSupported, cls,
                            "r" + std::to_string(i % 2));
    s.submitted.push_back(g);
  }
  return s;
}

std::vector<std::string> ids_of(const ReviewPage& page) {
  std::vector<std::string> out;
  for (const auto& item : page.items) out.push_back(item.instance_id);
  return out;
}

json body_of(const ReviewServer::Response& r) { return json::parse(r.body); }

}  // namespace

TEST_CASE("status names") {
  for (auto s : {ReviewStatus::kPending, ReviewStatus::kAccepted, ReviewStatus::kRejected}) {
    CHECK(try_parse_status(status_name(s)) == s);
  }
  CHECK_FALSE(try_parse_status("maybe"));
}

TEST_CASE("listing, filters and cursors") {
  ReviewStore store(fresh_submission());
  const auto all = store.list({}, std::nullopt, 100);
  CHECK(all.items.size() == 10);
  CHECK_FALSE(all.next_cursor);
  CHECK(std::is_sorted(all.items.begin(), all.items.end(),
                       [](const auto& a, const auto& b) { return a.instance_id < b.instance_id; }));
  for (const auto& item : all.items) CHECK(item.status == ReviewStatus::kPending);

  SUBCASE("pages cover everything exactly once") {
    std::vector<std::string> seen;
    std::optional<std::string> cursor;
    int pages = 0;
    do {
      const auto page = store.list({}, cursor, 3);
      for (const auto& id : ids_of(page)) seen.push_back(id);
      cursor = page.next_cursor;
      ++pages;
    } while (cursor);
    CHECK(pages == 4);
    CHECK(seen == ids_of(all));
  }
  SUBCASE("filters") {
    ReviewFilter f;
    f.cls = TransformationClass::kSimpleNegation;
    for (const auto& item : store.list(f, std::nullopt, 100).items) {
      CHECK(item.cls == TransformationClass::kSimpleNegation);
    }
    CHECK(store.list(f, std::nullopt, 100).items.size() == 3);
    ReviewFilter r;
    r.rule_id = "r1";
    CHECK(store.list(r, std::nullopt, 100).items.size() == 5);
    store.decide("i3", ReviewStatus::kAccepted);
    ReviewFilter s;
    s.status = ReviewStatus::kAccepted;
    CHECK(ids_of(store.list(s, std::nullopt, 100)) == std::vector<std::string>{"i3"});
  }
  SUBCASE("invalid cursor") {
    CHECK_THROWS_AS(store.list({}, std::string("nope"), 5), BadRequest);
  }
}

TEST_CASE("decisions") {
  ReviewStore store(fresh_submission());
  const auto accepted = store.decide("i0", ReviewStatus::kAccepted);
  CHECK(accepted.status == ReviewStatus::kAccepted);
  const auto rejected =
      store.decide("i1", ReviewStatus::kRejected, std::string("non-grammatical pronoun"));
  CHECK(rejected.status == ReviewStatus::kRejected);
  CHECK(rejected.rejection_reason == "non-grammatical pronoun");
  CHECK(store.log().size() == 2);

  // Re-deciding overrides; repeating is not logged again.
  CHECK(store.decide("i1", ReviewStatus::kAccepted).rejection_reason == std::nullopt);
  CHECK(store.log().size() == 3);
  store.decide("i1", ReviewStatus::kAccepted);
  CHECK(store.log().size() == 3);

  CHECK_THROWS_AS(store.decide("missing", ReviewStatus::kAccepted), NotFound);
  CHECK_THROWS_AS(store.decide("i2", ReviewStatus::kPending), BadRequest);
  CHECK(store.item("i1")->status == ReviewStatus::kAccepted);
  CHECK_FALSE(store.item("missing"));

  const auto sub = store.submission();
  CHECK(sub.reviewed_count() == 2);
  CHECK(sub.accepted_count() == 2);
  CHECK_FALSE(sub.review_complete());
  for (std::size_t i = 0; i < store.log().size(); ++i) CHECK(store.log()[i].seq == i + 1);
}

TEST_CASE("progress") {
  SUBCASE("270 accepted and 30 rejected") {
    ReviewStore store(fresh_submission(300));
    for (int i = 0; i < 300; ++i) {
      store.decide("i" + std::to_string(i), i < 270 ? ReviewStatus::kAccepted : ReviewStatus::kRejected);
    }
    const auto p = store.progress();
    CHECK(p.pending == 0);
    REQUIRE(p.acceptance_rate);
    CHECK(*p.acceptance_rate == doctest::Approx(0.90));
    CHECK(store.submission().acceptance_rate() == doctest::Approx(0.90));
  }
  SUBCASE("nothing reviewed") {
    ReviewStore store(fresh_submission());
    const auto p = store.progress();
    CHECK(p.pending == 10);
    CHECK_FALSE(p.acceptance_rate);
    CHECK(p.projected_acceptance_rate == 0.0);
  }
  SUBCASE("one accepted, nine pending") {
    ReviewStore store(fresh_submission());
    store.decide("i4", ReviewStatus::kAccepted);
    const auto p = store.progress();
    CHECK(p.accepted == 1);
    CHECK(p.rejected == 0);
    CHECK(p.pending == 9);
    CHECK(*p.acceptance_rate == doctest::Approx(1.0));
    CHECK(p.projected_acceptance_rate == doctest::Approx(0.1));
    CHECK_FALSE(store.submission().acceptance_rate());
  }
}

TEST_CASE("replaying the log") {
  std::mt19937_64 gen(7);
  for (int round = 0; round < 50; ++round) {
    ReviewStore store(fresh_submission(12));
    const int steps = static_cast<int>(gen() % 40);
    for (int s = 0; s < steps; ++s) {
      const std::string id = "i" + std::to_string(gen() % 12);
      const bool accept = gen() % 2 == 0;
      store.decide(id, accept ? ReviewStatus::kAccepted : ReviewStatus::kRejected,
                   accept ? std::nullopt : std::optional<std::string>("r" + std::to_string(s)));
    }
    const auto log = store.log();
    const auto base = store.submission();
    // Every prefix folds to a state that conserves the item count.
    for (std::size_t k = 0; k <= log.size(); ++k) {
      const std::vector<Decision> prefix(log.begin(), log.begin() + static_cast<long>(k));
      const auto items = ReviewStore::replay(base, prefix);
      std::size_t pending = 0, accepted = 0, rejected = 0;
      for (const auto& [id, item] : items) {
        pending += item.status == ReviewStatus::kPending;
        accepted += item.status == ReviewStatus::kAccepted;
        rejected += item.status == ReviewStatus::kRejected;
      }
      CHECK(pending + accepted + rejected == 12);
    }
    // The full log reproduces the live state, and replaying it twice changes nothing.
    const auto full = ReviewStore::replay(base, log);
    std::vector<Decision> doubled = log;
    doubled.insert(doubled.end(), log.begin(), log.end());
    const auto twice = ReviewStore::replay(base, doubled);
    for (const auto& [id, item] : full) {
      const auto live = store.item(id);
      CHECK(live->status == item.status);
      CHECK(live->rejection_reason == item.rejection_reason);
      CHECK(twice.at(id).status == item.status);
    }
    CHECK(acceptance_from_log(log) == store.submission().acceptance);
  }
  BreakerSubmission s = fresh_submission(2);
  CHECK_THROWS_AS(ReviewStore::replay(s, {{1, "ghost", ReviewStatus::kAccepted, std::nullopt}}), Error);
}

TEST_CASE("decision log persists across restarts") {
  TempDir dir("review_log");
  const auto log_path = dir / "nested" / "decisions.jsonl";
  {
    ReviewStore store(fresh_submission(), log_path);
    store.decide("i0", ReviewStatus::kAccepted);
    store.decide("i1", ReviewStatus::kRejected, std::string("ungrammatical"));
  }
  const auto on_disk = load_decision_log(log_path);
  REQUIRE(on_disk.size() == 2);
  CHECK(on_disk[1].reason == "ungrammatical");
  {
    ReviewStore store(fresh_submission(), log_path);
    CHECK(store.item("i1")->status == ReviewStatus::kRejected);
    CHECK(store.progress().pending == 8);
    store.decide("i2", ReviewStatus::kAccepted);
    CHECK(store.log().back().seq == 3);
  }
  CHECK(load_decision_log(log_path).size() == 3);

  write_text(dir / "bad.jsonl", "{\"seq\": 1, \"instance_id\": \"i0\", \"decision\": \"pending\"}\n");
  CHECK_THROWS_AS(load_decision_log(dir / "bad.jsonl"), Error);
}

TEST_CASE("concurrent readers and writers") {
  ReviewStore store(fresh_submission(200));
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&store, t] {
      for (int i = t; i < 200; i += 4) {
        store.decide("i" + std::to_string(i), ReviewStatus::kAccepted);
        (void)store.progress();
        (void)store.list({}, std::nullopt, 10);
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(store.progress().accepted == 200);
  CHECK(store.log().size() == 200);
}

TEST_CASE("review subset") {
  ReviewStore store(fresh_submission(30), {}, ReviewSubset{0.3, 11});
  ReviewFilter queue;
  queue.queue_only = true;
  const auto queued = store.list(queue, std::nullopt, 100).items;
  CHECK(queued.size() == 9);
  auto p = store.progress();
  CHECK(p.estimate);
  CHECK(p.queue_total == 9);
  for (std::size_t i = 0; i < queued.size(); ++i) {
    store.decide(queued[i].instance_id, i < 6 ? ReviewStatus::kAccepted : ReviewStatus::kRejected);
  }
  p = store.progress();
  CHECK(p.queue_pending == 0);
  CHECK(p.projected_acceptance_rate == doctest::Approx(6.0 / 9.0));

  ReviewStore again(fresh_submission(30), {}, ReviewSubset{0.3, 11});
  CHECK(ids_of(again.list(queue, std::nullopt, 100)) == ids_of({queued, std::nullopt}));
  CHECK_THROWS_AS(ReviewStore(fresh_submission(3), {}, ReviewSubset{0.0, 1}), Error);
}

TEST_CASE("adjusted potency follows the review") {
  auto f = reference_breaker_fixture();
  BreakerSubmission pending = f.breakers[0];
  pending.acceptance.clear();
  ReviewStore store(pending);
  CHECK_THROWS_AS(adjusted_potency(f.systems, store.submission()), Error);
  for (const auto& g : pending.submitted) {
    store.decide(g.instance.id, f.breakers[0].acceptance.at(g.instance.id)
                                    ? ReviewStatus::kAccepted
                                    : ReviewStatus::kRejected);
  }
  const auto reviewed = store.submission();
  const double p = potency(f.systems, reviewed);
  CHECK(p == doctest::Approx(0.5632 / 0.9));
  CHECK(adjusted_potency(f.systems, reviewed) == doctest::Approx(p * 0.9));
  CHECK(adjusted_potency(f.systems, reviewed) == doctest::Approx(0.5632));
}

TEST_CASE("rules ranked by rejections") {
  // 300 items over rules r0 and r1; 21 of the 30 rejections come from r1.
  ReviewStore store(fresh_submission(300));
  int r0_rejected = 0, r1_rejected = 0;
  for (int i = 0; i < 300; ++i) {
    const bool odd = i % 2 == 1;
    bool reject = false;
    if (odd && r1_rejected < 21) reject = ++r1_rejected > 0;
    if (!odd && r0_rejected < 9) reject = ++r0_rejected > 0;
    store.decide("i" + std::to_string(i), reject ? ReviewStatus::kRejected : ReviewStatus::kAccepted);
  }
  CHECK(*store.progress().acceptance_rate == doctest::Approx(0.90));
  ReviewFilter rejected;
  rejected.status = ReviewStatus::kRejected;
  std::map<std::string, int> per_rule;
  for (const auto& item : store.list(rejected, std::nullopt, 1000).items) ++per_rule[item.rule_id];
  CHECK(per_rule == std::map<std::string, int>{{"r0", 9}, {"r1", 21}});
}

TEST_CASE("server routes") {
  auto f = reference_breaker_fixture();
  BreakerSubmission sub = f.breakers[0];
  sub.submitted.resize(20);
  sub.acceptance.clear();
  for (auto& [breaker, preds] : f.systems[0].predictions) {
    if (preds.size() > 20) preds.resize(20);
  }
  ReviewStore store(sub);
  auto snapshot = std::make_shared<WikiSnapshot>();
  snapshot->add_page("P", {"Sentence zero."});
  for (int i = 0; i < 17; ++i) snapshot->add_page("Page_" + std::to_string(i), {"a", "b", "c", "d", "e"});
  SystemEntry system = f.systems[0];
  system.predictions.erase("unmodified");
  ReviewServer server(store, {system}, snapshot);

  SUBCASE("items") {
    const auto r = server.handle("GET", "/items", {{"limit", "5"}}, "");
    CHECK(r.status == 200);
    const auto body = body_of(r);
    CHECK(body["items"].size() == 5);
    CHECK(body["items"][0]["status"] == "pending");
    CHECK(body["items"][0]["class"] == "preserving");
    const auto next = server.handle("GET", "/items",
                                    {{"limit", "5"}, {"cursor", body["next_cursor"].get<std::string>()}}, "");
    CHECK(body_of(next)["items"][0]["instance_id"] != body["items"][0]["instance_id"]);
    CHECK(server.handle("GET", "/items", {{"cursor", "zzz"}}, "").status == 400);
    CHECK(server.handle("GET", "/items", {{"limit", "0"}}, "").status == 400);
    CHECK(server.handle("GET", "/items", {{"status", "odd"}}, "").status == 400);
    CHECK(server.handle("GET", "/items", {{"class", "odd"}}, "").status == 400);
  }
  SUBCASE("decisions and progress") {
    auto r = server.handle("POST", "/items/rule-based-0/decision",
                           {}, R"j({"decision": "rejected", "reason": "non-grammatical pronoun"})j");
    CHECK(r.status == 200);
    auto body = body_of(r);
    CHECK(body["item"]["status"] == "rejected");
    CHECK(body["item"]["rejection_reason"] == "non-grammatical pronoun");
    CHECK(body["progress"]["rejected"] == 1);
    CHECK(server.handle("POST", "/items/nope/decision", {}, R"j({"decision": "accepted"})j").status == 404);
    CHECK(server.handle("POST", "/items/rule-based-1/decision", {}, "not json").status == 400);
    CHECK(server.handle("POST", "/items/rule-based-1/decision", {}, R"j({"decision": "pending"})j").status == 400);
    CHECK(server.handle("POST", "/items/rule-based-1/decision", {}, R"j({"x": 1})j").status == 400);

    const auto progress = body_of(server.handle("GET", "/progress", {}, ""));
    CHECK(progress["total"] == 20);
    CHECK(progress["pending"] == 19);
    CHECK(progress["r_accept"] == 0.0);
  }
  SUBCASE("evidence") {
    const auto r = server.handle("GET", "/items/rule-based-3/evidence", {}, "");
    CHECK(r.status == 200);
    const auto body = body_of(r);
    CHECK(body["evidence"][0][0]["page"] == "Page_3");
    CHECK(body["evidence"][0][0]["text"] == "d");
    CHECK(server.handle("GET", "/items/nope/evidence", {}, "").status == 404);
  }
  SUBCASE("leaderboard preview") {
    auto preview = body_of(server.handle("GET", "/leaderboard/preview", {}, ""));
    CHECK(preview["potency"].is_null());
    CHECK(preview["complete"] == false);
    for (int i = 0; i < 20; ++i) {
      server.handle("POST", "/items/rule-based-" + std::to_string(i) + "/decision", {},
                    i < 18 ? R"j({"decision": "accepted"})j" : R"j({"decision": "rejected"})j");
    }
    preview = body_of(server.handle("GET", "/leaderboard/preview", {}, ""));
    CHECK(preview["complete"] == true);
    CHECK(preview["acceptance_rate"].get<double>() == doctest::Approx(0.9));
    // All 20 leading instances are among the wrongly labelled ones.
    CHECK(preview["potency"].get<double>() == doctest::Approx(1.0));
    CHECK(preview["adjusted_potency"].get<double>() == doctest::Approx(0.9));
  }
  SUBCASE("unknown route") {
    CHECK(server.handle("GET", "/nowhere", {}, "").status == 404);
    CHECK(server.handle("DELETE", "/items", {}, "").status == 404);
  }
}

TEST_CASE("server over a socket") {
  ReviewStore store(fresh_submission());
  ReviewServer server(store);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread worker([&server] { server.listen_after_bind(); });

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(5);
  auto listed = client.Get("/items?limit=2");
  REQUIRE(listed);
  CHECK(listed->status == 200);
  CHECK(json::parse(listed->body)["items"].size() == 2);
  CHECK(listed->get_header_value("Access-Control-Allow-Origin") == "*");

  auto decided = client.Post("/items/i5/decision", R"j({"decision": "accepted"})j", "application/json");
  REQUIRE(decided);
  CHECK(decided->status == 200);
  CHECK(store.item("i5")->status == ReviewStatus::kAccepted);

  auto missing = client.Post("/items/zz/decision", R"j({"decision": "accepted"})j", "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  server.stop();
  worker.join();
}
