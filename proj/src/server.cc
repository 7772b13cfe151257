#include "nerkit/server.h"

#include <sstream>

#include "httplib.h"
#include "nerkit/error.h"

namespace nerkit {

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDiffId: return 404;
    case ErrorCode::kIo:
    case ErrorCode::kInvariantBreach: return 500;
    default: return 400;
  }
}

void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view name, const std::string& message) {
  send_json(res, {{"error", name}, {"message", message}}, status);
}

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "yes"; }

std::size_t size_param(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v[0] == '-') {
    throw Error(ErrorCode::kBadPage, std::string(key) + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

struct AdjudicationServer::Impl {
  AdjudicationSession& session;
  ServerOptions options;
  httplib::Server http;
  int port = -1;

  Impl(AdjudicationSession& s, ServerOptions o) : session(s), options(std::move(o)) { routes(); }

  template <typename Handler>
  static auto guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, http_status(e.code()), error_code_name(e.code()), e.what());
      } catch (const nlohmann::json::exception& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "InternalError", e.what());
      }
    };
  }

  void routes() {
    http.Get("/api/v1/disagreements", guarded([this](const httplib::Request& req, httplib::Response& res) {
      ListFilter filter;
      if (req.has_param("undecided")) filter.undecided_only = truthy(req.get_param_value("undecided"));
      if (req.has_param("domain")) {
        filter.domain = parse_domain(req.get_param_value("domain"));
        if (!filter.domain) throw Error(ErrorCode::kBadPage, "unknown domain");
      }
      if (req.has_param("format")) {
        filter.format = parse_format(req.get_param_value("format"));
        if (!filter.format) throw Error(ErrorCode::kBadPage, "unknown format");
      }
      if (req.has_param("pattern")) filter.pattern = req.get_param_value("pattern");
      const Page page = session.list_disagreements(filter, size_param(req, "page", 0),
                                                   size_param(req, "page_size", 50));
      send_json(res, {{"total", page.total},
                      {"page", page.page},
                      {"page_size", page.page_size},
                      {"pages", page.pages},
                      {"versions", session.versions()},
                      {"items", page.items}});
    }));

    http.Get(R"(/api/v1/disagreements/([0-9A-Za-z_-]+))",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               auto item = session.get(req.matches[1]);
               if (!item) {
                 send_error(res, 404, "UnknownDiffId", "unknown diff_id " + std::string(req.matches[1]));
                 return;
               }
               send_json(res, *item);
             }));

    http.Post("/api/v1/decisions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      std::optional<std::string> note;
      if (body.contains("note") && !body["note"].is_null()) note = body["note"].get<std::string>();
      const Progress p = session.record_decision(body.at("diff_id").get<std::string>(),
                                                 body.at("chosen_label").get<std::string>(),
                                                 body.value("chooser", ""), std::move(note));
      send_json(res, {{"progress", to_json(p)}});
    }));

    http.Get("/api/v1/progress", guarded([this](const httplib::Request&, httplib::Response& res) {
      nlohmann::json j = to_json(session.progress());
      j["per_version_stats"] = to_json(session.stats());
      send_json(res, j);
    }));

    http.Get("/api/v1/export", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::ostringstream out;
      write_decisions(session.export_decisions(), out);
      res.set_content(out.str(), "application/x-ndjson");
    }));

    if (options.static_dir) {
      if (!http.set_mount_point("/", options.static_dir->string())) {
        throw Error(ErrorCode::kIo, "static dir not found: " + options.static_dir->string());
      }
    }
  }
};

AdjudicationServer::AdjudicationServer(AdjudicationSession& session, ServerOptions options)
    : impl_(std::make_unique<Impl>(session, std::move(options))) {}

AdjudicationServer::~AdjudicationServer() { stop(); }

int AdjudicationServer::bind() {
  if (impl_->options.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(impl_->options.host);
  } else if (impl_->http.bind_to_port(impl_->options.host, impl_->options.port)) {
    impl_->port = impl_->options.port;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + impl_->options.host + ":" +
                                    std::to_string(impl_->options.port));
  }
  return impl_->port;
}

void AdjudicationServer::serve() { impl_->http.listen_after_bind(); }

void AdjudicationServer::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace nerkit
