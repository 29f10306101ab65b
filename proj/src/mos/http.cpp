#include <fstream>
#include <iterator>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ruslan/error.hpp"
#include "ruslan/mos.hpp"

namespace ruslan::mos {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, {{"error", code}, {"message", message}});
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSample: return 404;
    case ErrorCode::Unauthorized: return 401;
    case ErrorCode::ScoreOutOfRange:
    case ErrorCode::InvalidArgument: return 400;
    default: return 500;
  }
}

std::string bearer(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return header.substr(kPrefix.size());
}

json report_json(const MosReport& report) {
  json cells = json::array();
  for (const auto& [key, cell] : report.cells) {
    json c = {{"kind", to_string(key.first)}, {"axis", to_string(key.second)}, {"count", cell.count}};
    if (const auto m = cell.mean()) {
      c["mean"] = *m;
      c["rendered"] = format_score(*m);
    } else {
      c["mean"] = nullptr;
    }
    cells.push_back(std::move(c));
  }
  return {{"schema", "ruslan.mos-report/1"},
          {"cells", cells},
          {"rows", {{"real", report.row(Kind::Real)}, {"synthesized", report.row(Kind::Synthesized)}}},
          {"table", report.table()}};
}

}  // namespace

struct HttpServer::Impl {
  MosStore& store;
  ServerConfig cfg;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  Impl(MosStore& s, ServerConfig c) : store(s), cfg(std::move(c)) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), to_string(e.code()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    });

    server.Post("/surveys", [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::uint64_t> seed;
      if (!req.body.empty()) {
        const json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object()) return send_error(res, 400, "InvalidArgument", "body must be a JSON object");
        if (body.contains("seed")) {
          if (!body["seed"].is_number_unsigned()) return send_error(res, 400, "InvalidArgument", "seed must be a non-negative integer");
          seed = body["seed"].get<std::uint64_t>();
        }
      }
      const Survey s = store.create_survey(seed);
      json samples = json::array();
      for (const auto& id : s.order) samples.push_back({{"sampleId", id}, {"audioUrl", "/audio/" + id}});
      json levels = json::array();
      for (const auto& l : scale()) {
        levels.push_back({{"score", l.score}, {"quality", l.quality}, {"distortions", l.distortions}});
      }
      send_json(res, 201,
                {{"surveyId", s.survey_id},
                 {"token", s.token},
                 {"samples", samples},
                 {"axes", {to_string(Axis::Naturalness), to_string(Axis::Intelligibility)}},
                 {"scale", levels}});
    });

    server.Get(R"(/audio/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto* entry = store.pool().find(req.matches[1].str());
      if (!entry) return send_error(res, 404, "UnknownSample", "no sample '" + req.matches[1].str() + "'");
      std::ifstream in(entry->audio_path, std::ios::binary);
      if (!in) return send_error(res, 500, "IoFailure", "audio unavailable");
      std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      res.set_content(std::move(bytes), "audio/wav");
    });

    server.Post("/ratings", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string token = bearer(req);
      if (token.empty() || !store.survey_for_token(token)) {
        return send_error(res, 401, "Unauthorized", "missing or unknown respondent token");
      }
      const json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("sampleId") || !body["sampleId"].is_string() ||
          !body.contains("axis") || !body["axis"].is_string() || !body.contains("score") ||
          !body["score"].is_number_integer()) {
        return send_error(res, 400, "InvalidArgument", "expected {sampleId: string, axis: string, score: integer}");
      }
      const auto axis = parse_axis(body["axis"].get<std::string>());
      if (!axis) return send_error(res, 400, "InvalidArgument", "axis must be naturalness or intelligibility");
      const auto score = body["score"].get<long long>();
      if (score < kMinScore || score > kMaxScore) {
        return send_error(res, 400, "ScoreOutOfRange", "score must be an integer from 1 to 5");
      }
      const Rating r = store.submit(token, body["sampleId"].get<std::string>(), *axis, static_cast<int>(score));
      send_json(res, 200, {{"sampleId", r.sample_id}, {"axis", to_string(r.axis)}, {"score", r.score}});
    });

    server.Get("/report", [this](const httplib::Request& req, httplib::Response& res) {
      if (cfg.admin_token.empty() || bearer(req) != cfg.admin_token) {
        return send_error(res, 403, "Forbidden", "admin token required");
      }
      send_json(res, 200, report_json(store.report()));
    });
  }
};

HttpServer::HttpServer(MosStore& store, ServerConfig cfg) : impl_(std::make_unique<Impl>(store, std::move(cfg))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  if (impl_->port >= 0) return impl_->port;
  if (impl_->cfg.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->cfg.host);
  } else if (impl_->server.bind_to_port(impl_->cfg.host, impl_->cfg.port)) {
    impl_->port = impl_->cfg.port;
  }
  if (impl_->port < 0) {
    throw Error(ErrorCode::IoFailure, "cannot bind " + impl_->cfg.host + ":" + std::to_string(impl_->cfg.port));
  }
  return impl_->port;
}

void HttpServer::run() {
  bind();
  impl_->server.listen_after_bind();
}

void HttpServer::start() {
  bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace ruslan::mos
