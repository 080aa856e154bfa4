// Copyright 2026 The Scriptor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scriptor/loop/review_server.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "scriptor/core/error.hpp"

namespace scriptor::loop {
namespace {

using nlohmann::ordered_json;

ordered_json box_json(const BBox& b) { return {{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

ordered_json annotation_json(const Annotation& a) {
  ordered_json j;
  j["id"] = a.id.value;
  j["column"] = a.column.str();
  j["x"] = a.box.x;
  j["y"] = a.box.y;
  j["w"] = a.box.w;
  j["h"] = a.box.h;
  j["class"] = to_int(a.cls);
  j["confidence"] = a.confidence ? ordered_json(*a.confidence) : ordered_json(nullptr);
  j["status"] = std::string(to_string(a.status));
  j["origin"] = std::string(to_string(a.origin));
  j["cycle"] = a.cycle;
  j["adjusted"] = a.adjusted_box ? box_json(*a.adjusted_box) : ordered_json(nullptr);
  return j;
}

BBox parse_box(const nlohmann::json& j) {
  if (j.is_array()) {
    if (j.size() != 4) throw Error(ErrorCode::InvalidArgument, "box array needs 4 integers");
    return BBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
  }
  return BBox{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  send_json(res, ordered_json{{"error", code}, {"message", msg}}, status);
}

int query_int(const httplib::Request& req, const char* key, int fallback) {
  if (!req.has_param(key)) return fallback;
  try {
    return std::stoi(req.get_param_value(key));
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("query parameter '") + key +
                                                "' must be an integer");
  }
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownId:
    case ErrorCode::UnknownColumn:
      return 404;
    case ErrorCode::AlreadyDecided:
    case ErrorCode::DuplicateAccepted:
    case ErrorCode::PreviousCycleOpen:
    case ErrorCode::PendingReviewsRemain:
    case ErrorCode::InvalidPhase:
      return 409;
    case ErrorCode::BoxOutOfBounds:
      return 422;
    case ErrorCode::IoError:
      return 500;
    default:
      return 400;
  }
}

ReviewServer::ReviewServer(Orchestrator& orchestrator, ServerOptions options)
    : orch_(orchestrator), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ReviewServer::~ReviewServer() {
  stop();
  for (auto& w : workers_)
    if (w.joinable()) w.join();
}

int ReviewServer::bind() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0)
    throw Error(ErrorCode::IoError, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  return port_;
}

void ReviewServer::run() { server_->listen_after_bind(); }

int ReviewServer::start() {
  int port = bind();
  thread_ = std::thread([this] { run(); });
  server_->wait_until_ready();
  return port;
}

void ReviewServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string ReviewServer::launch_job(std::function<ordered_json()> work) {
  std::string id;
  {
    std::lock_guard lock(jobs_mu_);
    id = std::to_string(next_job_++);
    jobs_[id] = Job{};
  }
  workers_.emplace_back([this, id, work = std::move(work)] {
    Job done;
    try {
      done.result = work();
      done.state = "done";
    } catch (const std::exception& e) {
      done.state = "failed";
      done.error = e.what();
    }
    std::lock_guard lock(jobs_mu_);
    jobs_[id] = std::move(done);
  });
  return id;
}

void ReviewServer::install_routes() {
  auto& srv = *server_;

  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const nlohmann::json::exception& e) {
      send_error(res, 400, "InvalidArgument", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "InternalError", e.what());
    }
  });

  srv.Get("/api/columns", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<Status> want;
    std::string status = req.has_param("status") ? req.get_param_value("status") : "all";
    if (status != "all" && status != "pending" && status != "decided")
      throw Error(ErrorCode::InvalidArgument, "status must be pending, decided or all");
    int page = query_int(req, "page", 1);
    int size = query_int(req, "page_size", options_.default_page_size);
    if (page < 1 || size < 1 || size > options_.max_page_size)
      throw Error(ErrorCode::InvalidArgument, "bad paging parameters");

    auto& store = orch_.store();
    std::map<ColumnKey, std::pair<int, int>> counts;  // pending, decided
    for (const auto& a : store.query()) {
      auto& c = counts[a.column];
      (a.status == Status::pending ? c.first : c.second)++;
    }
    ordered_json items = ordered_json::array();
    int total = 0;
    const int first = (page - 1) * size;
    for (const auto& info : store.columns()) {
      auto [pending, decided] = counts[info.key];
      if (status == "pending" && pending == 0) continue;
      if (status == "decided" && (pending > 0 || decided == 0)) continue;
      if (total >= first && total < first + size) {
        ordered_json item;
        item["id"] = info.key.str();
        item["manuscript"] = info.key.manuscript.str();
        item["page"] = info.key.page;
        item["side"] = std::string(1, side_letter(info.key.side));
        item["column"] = info.key.column;
        item["width"] = info.width;
        item["height"] = info.height;
        item["scribe"] = info.scribe ? ordered_json(info.scribe->str()) : ordered_json(nullptr);
        item["pending"] = pending;
        item["decided"] = decided;
        items.push_back(std::move(item));
      }
      ++total;
    }
    send_json(res, ordered_json{{"page", page}, {"page_size", size}, {"total", total}, {"items", items}});
  });

  srv.Get(R"(/api/columns/([^/]+)/image)", [this](const httplib::Request& req, httplib::Response& res) {
    auto key = ColumnKey::parse(req.matches[1].str());
    auto info = orch_.store().column(key);
    if (!info) throw Error(ErrorCode::UnknownColumn, key.str());
    std::ifstream in(info->image, std::ios::binary);
    if (info->image.empty() || !in) throw Error(ErrorCode::UnknownColumn, "no image for " + key.str());
    std::ostringstream buf;
    buf << in.rdbuf();
    res.set_content(buf.str(), "image/png");
  });

  srv.Get(R"(/api/columns/([^/]+)/boxes)", [this](const httplib::Request& req, httplib::Response& res) {
    auto key = ColumnKey::parse(req.matches[1].str());
    auto info = orch_.store().column(key);
    if (!info) throw Error(ErrorCode::UnknownColumn, key.str());
    AnnotationFilter f;
    f.column = key;
    ordered_json boxes = ordered_json::array();
    for (const auto& a : orch_.store().query(f)) boxes.push_back(annotation_json(a));
    send_json(res, ordered_json{{"column", key.str()},
                                {"width", info->width},
                                {"height", info->height},
                                {"boxes", boxes}});
  });

  srv.Post(R"(/api/boxes/(\d+)/decision)", [this](const httplib::Request& req, httplib::Response& res) {
    AnnotationId id{std::stoull(req.matches[1].str())};
    auto body = nlohmann::json::parse(req.body);
    Decision d;
    d.action = decision_action_from_string(body.at("action").get<std::string>());
    if (body.contains("box") && !body["box"].is_null()) d.box = parse_box(body["box"]);
    if (body.contains("class") && !body["class"].is_null())
      d.cls = class_from_int(body["class"].get<long long>());
    if (d.action == DecisionAction::adjust && !d.box)
      throw Error(ErrorCode::InvalidArgument, "adjust needs a box");
    send_json(res, annotation_json(orch_.decide(id, d)));
  });

  srv.Get("/api/progress", [this](const httplib::Request&, httplib::Response& res) {
    auto s = orch_.current();
    int pending_total = 0;
    int decided_total = 0;
    for (const auto& a : orch_.store().query())
      (a.status == Status::pending ? pending_total : decided_total)++;
    send_json(res, ordered_json{{"cycle", s.cycle},
                                {"phase", std::string(to_string(s.phase))},
                                {"pending_count", orch_.pending_count()},
                                {"pending_total", pending_total},
                                {"decided_total", decided_total}});
  });

  srv.Get("/api/cycles", [this](const httplib::Request&, httplib::Response& res) {
    ordered_json out = ordered_json::array();
    for (const auto& s : orch_.history()) out.push_back(s.to_json());
    send_json(res, out);
  });

  srv.Post("/api/cycle/start", [this](const httplib::Request& req, httplib::Response& res) {
    auto spec = dataset::CycleSpec::from_json(nlohmann::json::parse(req.body));
    auto id = launch_job([this, spec] { return orch_.start_cycle(spec).to_json(); });
    send_json(res, ordered_json{{"job", id}}, 202);
  });

  srv.Post("/api/cycle/merge", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, orch_.merge_cycle().to_json());
  });

  srv.Get(R"(/api/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    std::lock_guard lock(jobs_mu_);
    auto it = jobs_.find(req.matches[1].str());
    if (it == jobs_.end()) throw Error(ErrorCode::UnknownId, "job " + req.matches[1].str());
    ordered_json j{{"id", it->first}, {"state", it->second.state}};
    if (it->second.state == "done") j["result"] = it->second.result;
    if (it->second.state == "failed") j["error"] = it->second.error;
    send_json(res, j);
  });

  if (!options_.static_dir.empty()) {
    if (!srv.set_mount_point("/", options_.static_dir.string()))
      throw Error(ErrorCode::IoError, "static directory not found: " + options_.static_dir.string());
  }
}

}  // namespace scriptor::loop
