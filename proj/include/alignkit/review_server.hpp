#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "alignkit/review_session.hpp"

namespace alignkit {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// Where POST /api/finalize writes the alignment XML.
  std::filesystem::path output = "reviewed.rdf";
  /// Directory served at /; a placeholder page is served without one.
  std::optional<std::filesystem::path> assets_dir;
};

/// HTTP+JSON front end of a ReviewSession:
///   GET  /api/session
///   GET  /api/queue?offset=&limit=
///   GET  /api/context/{cell_id}
///   POST /api/decision       (Decision JSON)
///   POST /api/finalize       ({"unreviewed_policy": "keep"|"drop"})
///   GET  /api/metrics?reference=path[&unreviewed_policy=]
/// Readers run concurrently; decisions and finalization are serialized.
class ReviewServer {
 public:
  ReviewServer(ReviewSession& session, ServerOptions options);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds the socket and returns the bound port; throws std::runtime_error.
  int bind();
  /// Serves requests on the bound socket until stop().
  void serve();
  void stop();
  bool running() const;

  static bool is_loopback(const std::string& host);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace alignkit
