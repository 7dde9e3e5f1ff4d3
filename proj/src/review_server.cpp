#include "alignkit/review_server.hpp"

#include <mutex>
#include <shared_mutex>

#include <httplib.h>

#include "alignkit/evaluation.hpp"
#include "alignkit/io.hpp"
#include "alignkit/report.hpp"

namespace alignkit {

namespace {

constexpr const char* kJson = "application/json";

constexpr const char* kPlaceholder =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>alignkit review</title></head>\n"
    "<body><h1>alignkit review service</h1>\n"
    "<p>No UI assets configured. The JSON API is available under <code>/api/</code>.</p>\n"
    "</body></html>\n";

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  nlohmann::ordered_json body;
  body["error"] = message;
  send_json(res, status, body);
}

std::optional<std::size_t> size_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string text = req.get_param_value(name);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(name) + " must be a nonnegative integer");
  }
  if (pos != text.size() || text.empty() || text[0] == '-') {
    throw std::invalid_argument(std::string(name) + " must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

UnreviewedPolicy policy_or_keep(const std::string& text) {
  if (text.empty()) return UnreviewedPolicy::Keep;
  auto p = unreviewed_policy_from_string(text);
  if (!p) throw std::invalid_argument("unreviewed_policy must be keep or drop");
  return *p;
}

int status_for(const ReviewError& e) {
  return e.code() == ReviewError::Code::UnknownCell ? 404 : 400;
}

}  // namespace

struct ReviewServer::Impl {
  ReviewSession& session;
  ServerOptions options;
  httplib::Server server;
  std::shared_mutex mutex;

  Impl(ReviewSession& s, ServerOptions o) : session(s), options(std::move(o)) { routes(); }

  void routes() {
    server.Get("/api/session", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock lock(mutex);
      send_json(res, 200, session.stats());
    });

    server.Get("/api/queue", [this](const httplib::Request& req, httplib::Response& res) {
      std::size_t offset = 0;
      std::size_t limit = 50;
      try {
        offset = size_param(req, "offset").value_or(0);
        limit = size_param(req, "limit").value_or(50);
      } catch (const std::invalid_argument& e) {
        return send_error(res, 400, e.what());
      }
      std::shared_lock lock(mutex);
      auto items = session.queue();
      nlohmann::ordered_json body;
      body["total"] = items.size();
      body["offset"] = offset;
      body["limit"] = limit;
      body["items"] = nlohmann::ordered_json::array();
      for (std::size_t i = offset; i < items.size() && i - offset < limit; ++i) {
        const auto& item = items[i];
        nlohmann::ordered_json o;
        o["id"] = item.id;
        o["entity1"] = item.cell.entity1.str();
        o["entity2"] = item.cell.entity2.str();
        o["relation"] = std::string(glyph(item.cell.relation));
        o["confidence"] = item.cell.confidence;
        o["ambiguous"] = item.ambiguous;
        o["low_confidence"] = item.low_confidence;
        o["group"] = item.group;
        body["items"].push_back(std::move(o));
      }
      send_json(res, 200, body);
    });

    server.Get(R"(/api/context/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::shared_lock lock(mutex);
      try {
        send_json(res, 200, session.context(req.matches[1].str()));
      } catch (const ReviewError& e) {
        send_error(res, status_for(e), e.what());
      }
    });

    server.Post("/api/decision", [this](const httplib::Request& req, httplib::Response& res) {
      Decision d;
      try {
        d = decision_from_json(req.body);
      } catch (const ReviewError& e) {
        return send_error(res, 400, e.what());
      }
      std::unique_lock lock(mutex);
      try {
        bool appended = session.record(d);
        nlohmann::ordered_json body;
        body["appended"] = appended;
        body["effective"] = nlohmann::ordered_json::parse(decision_to_json(session.effective().at(d.cell_id)));
        body["queue"] = session.queue().size();
        send_json(res, 200, body);
      } catch (const ReviewError& e) {
        send_error(res, status_for(e), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    });

    server.Post("/api/finalize", [this](const httplib::Request& req, httplib::Response& res) {
      UnreviewedPolicy policy = UnreviewedPolicy::Keep;
      try {
        if (!req.body.empty()) {
          auto body = nlohmann::json::parse(req.body);
          if (!body.is_object()) throw std::invalid_argument("finalize body must be an object");
          if (body.contains("unreviewed_policy")) {
            if (!body["unreviewed_policy"].is_string()) {
              throw std::invalid_argument("unreviewed_policy must be keep or drop");
            }
            policy = policy_or_keep(body["unreviewed_policy"].get<std::string>());
          }
        }
      } catch (const std::exception& e) {
        return send_error(res, 400, e.what());
      }
      std::unique_lock lock(mutex);
      std::string xml = serialize_alignment_xml(session.finalize(policy));
      try {
        write_file(options.output, xml);
      } catch (const IoError& e) {
        return send_error(res, 500, e.what());
      }
      res.status = 200;
      res.set_content(xml, "application/xml");
    });

    server.Get("/api/metrics", [this](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("reference")) return send_error(res, 400, "reference parameter is required");
      UnreviewedPolicy policy = UnreviewedPolicy::Keep;
      Alignment reference;
      try {
        policy = policy_or_keep(req.get_param_value("unreviewed_policy"));
        reference = load_alignment(req.get_param_value("reference"));
      } catch (const IoError& e) {
        return send_error(res, 404, e.what());
      } catch (const std::exception& e) {
        return send_error(res, 400, e.what());
      }
      std::shared_lock lock(mutex);
      auto report = evaluate(session.finalize(policy), reference);
      send_json(res, 200, nlohmann::ordered_json::parse(report_to_json(report)));
    });

    if (options.assets_dir) {
      server.set_mount_point("/", options.assets_dir->string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kPlaceholder, "text/html; charset=utf-8");
      });
    }
  }
};

ReviewServer::ReviewServer(ReviewSession& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind() {
  const auto& o = impl_->options;
  int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host)
                         : (impl_->server.bind_to_port(o.host, o.port) ? o.port : -1);
  if (port < 0) {
    throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return port;
}

void ReviewServer::serve() { impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
}

bool ReviewServer::running() const { return impl_->server.is_running(); }

bool ReviewServer::is_loopback(const std::string& host) {
  return host == "127.0.0.1" || host == "localhost" || host == "::1";
}

}  // namespace alignkit
