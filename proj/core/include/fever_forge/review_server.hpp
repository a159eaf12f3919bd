#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fever_forge/corpus.hpp"
#include "fever_forge/review.hpp"
#include "fever_forge/scorer.hpp"
#include "fever_forge/tournament.hpp"

namespace fever_forge {

// HTTP+JSON surface of a ReviewStore:
//
//   GET  /items?status=&class=&rule_id=&queue=&cursor=&limit=
//   POST /items/{id}/decision      {"decision": "accepted"|"rejected",
//                                   "reason": "..."}
//   GET  /items/{id}/evidence      (needs a wiki snapshot)
//   GET  /progress
//   GET  /leaderboard/preview
//
// handle() is the transport-independent core; listen() serves it over
// cpp-httplib.
class ReviewServer {
 public:
  struct Response {
    int status = 200;
    std::string body;
  };

  ReviewServer(ReviewStore& store, std::vector<SystemEntry> preview_systems = {},
               std::shared_ptr<const WikiSnapshot> snapshot = nullptr,
               ScoreOptions options = {});
  ~ReviewServer();

  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  Response handle(std::string_view method, std::string_view path,
                  const std::map<std::string, std::string>& query,
                  std::string_view body) const;

  // Binds (port 0 picks a free port) and returns the bound port. Throws Error
  // when the address is unavailable.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen_after_bind();
  void stop();

 private:
  Response list_items(const std::map<std::string, std::string>& query) const;
  Response decide(const std::string& id, std::string_view body) const;
  Response evidence(const std::string& id) const;
  Response progress() const;
  Response preview() const;

  struct Http;

  ReviewStore& store_;
  std::vector<SystemEntry> systems_;
  std::shared_ptr<const WikiSnapshot> snapshot_;
  ScoreOptions options_;
  std::unique_ptr<Http> http_;
};

}  // namespace fever_forge
