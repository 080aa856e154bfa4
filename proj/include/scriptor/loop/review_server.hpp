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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "scriptor/core/error.hpp"
#include "scriptor/loop/orchestrator.hpp"

namespace httplib {
class Server;
}

namespace scriptor::loop {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;                    // 0 = any free port
  std::filesystem::path static_dir;   // review UI assets, optional
  int default_page_size = 50;
  int max_page_size = 500;
};

/// HTTP status for an error code: 404 unknown ids, 409 state conflicts,
/// 422 out-of-bounds geometry, 400 otherwise.
int http_status(ErrorCode code) noexcept;

/// JSON review API over an orchestrator. Endpoints and payloads are listed
/// in docs/FORMATS.md. Reads run concurrently; decisions are serialized by
/// the orchestrator.
class ReviewServer {
 public:
  ReviewServer(Orchestrator& orchestrator, ServerOptions options);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds the socket and returns the port actually used.
  int bind();
  /// Serves until stop(); requires bind().
  void run();
  /// bind() + run() on a background thread; returns the port.
  int start();
  void stop();

  int port() const noexcept { return port_; }

 private:
  struct Job {
    std::string state = "running";  // running | done | failed
    nlohmann::ordered_json result;
    std::string error;
  };

  void install_routes();
  std::string launch_job(std::function<nlohmann::ordered_json()> work);

  Orchestrator& orch_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = -1;

  std::mutex jobs_mu_;
  std::map<std::string, Job> jobs_;
  std::vector<std::thread> workers_;
  int next_job_ = 1;
};

}  // namespace scriptor::loop
