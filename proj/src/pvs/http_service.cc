// Copyright 2026 The anonkey Authors.
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

#include "anonkey/pvs/http_service.h"

#include <spdlog/spdlog.h>

#include "anonkey/core/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace anonkey::pvs {

using nlohmann::json;

PvsHttpService::PvsHttpService(Pvs& pvs)
    : pvs_(pvs), http_(std::make_unique<httplib::Server>()) {
  http_->Get("/health", [this](const httplib::Request&,
                               httplib::Response& res) {
    const Health h = pvs_.health();
    json body = {{"status", h.stale ? "stale" : "ok"},
                 {"stale", h.stale},
                 {"root", h.root.Hex()},
                 {"old_roots", h.old_roots},
                 {"nullifiers", h.nullifiers},
                 {"last_sync_ms", h.last_sync_ms},
                 {"entropy", std::string(EntropyKindName(h.entropy))},
                 {"entropy_bytes_served", h.entropy_bytes_served},
                 {"max_t", pvs_.options().max_t}};
    res.set_content(body.dump(), "application/json");
  });
  http_->Get("/nullifiers", [this](const httplib::Request&,
                                   httplib::Response& res) {
    json arr = json::array();
    for (const Digest& d : pvs_.nullifiers().Nullifiers()) {
      arr.push_back(d.Hex());
    }
    res.set_content(json{{"nullifiers", arr}}.dump(), "application/json");
  });
}

PvsHttpService::~PvsHttpService() { Stop(); }

uint16_t PvsHttpService::Start(const std::string& host, uint16_t port) {
  int bound = port == 0 ? http_->bind_to_any_port(host)
                        : (http_->bind_to_port(host, port) ? port : -1);
  if (bound <= 0) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  spdlog::info("validation server status endpoint on {}:{}", host, bound);
  return static_cast<uint16_t>(bound);
}

void PvsHttpService::Stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace anonkey::pvs
