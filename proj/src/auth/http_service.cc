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

#include "anonkey/auth/http_service.h"

#include <spdlog/spdlog.h>

#include "anonkey/core/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace anonkey::auth {

using nlohmann::json;

namespace {

void ReplyJson(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int HttpStatusFor(RegisterStatus s) {
  switch (s) {
    case RegisterStatus::kAccepted:
      return 200;
    case RegisterStatus::kMalformed:
      return 400;
    case RegisterStatus::kBadCertificate:
    case RegisterStatus::kBadSignature:
      return 403;
    case RegisterStatus::kDuplicate:
      return 409;
    case RegisterStatus::kCapacity:
      return 507;
  }
  return 500;
}

json HexList(const std::vector<Digest>& v) {
  json arr = json::array();
  for (const Digest& d : v) arr.push_back(d.Hex());
  return arr;
}

}  // namespace

AuthHttpService::AuthHttpService(AuthServer& server, NullifierLister nullifiers)
    : server_(server),
      nullifiers_(std::move(nullifiers)),
      http_(std::make_unique<httplib::Server>()) {
  Install();
}

AuthHttpService::~AuthHttpService() { Stop(); }

void AuthHttpService::Install() {
  http_->Post("/v1/register", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Bytes cert, sig;
    Commitment c;
    try {
      json j = json::parse(req.body);
      cert = FromHex(j.at("certificate").get<std::string>());
      c.value = Digest::FromHex(j.at("commitment").get<std::string>());
      sig = FromHex(j.at("signature").get<std::string>());
    } catch (const std::exception& e) {
      ReplyJson(res, 400, {{"accepted", false},
                           {"reason", "malformed"},
                           {"detail", e.what()}});
      return;
    }
    try {
      RegisterResult r = server_.Register(cert, c, sig);
      json body = {{"accepted", r.accepted()},
                   {"reason", std::string(RegisterStatusName(r.status))}};
      if (r.accepted()) body["new_root"] = r.new_root.Hex();
      ReplyJson(res, HttpStatusFor(r.status), body);
    } catch (const std::exception& e) {
      spdlog::error("register failed: {}", e.what());
      ReplyJson(res, 500, {{"accepted", false}, {"reason", "internal"}});
    }
  });

  http_->Get("/v1/tree", [this](const httplib::Request&,
                                httplib::Response& res) {
    auto snap = server_.Snapshot();
    ReplyJson(res, 200,
              {{"depth", snap->tree.depth()},
               {"hash_profile",
                std::string(HashProfileName(snap->tree.profile()))},
               {"next_free", snap->tree.next_free()},
               {"root", snap->tree.Root().Hex()},
               {"snapshot", ToHex(snap->tree.Serialize())}});
  });

  http_->Get("/v1/old-roots", [this](const httplib::Request&,
                                     httplib::Response& res) {
    auto snap = server_.Snapshot();
    ReplyJson(res, 200, {{"old_roots", HexList(snap->old_roots)},
                         {"root", snap->tree.Root().Hex()}});
  });

  http_->Get("/v1/vk", [this](const httplib::Request&, httplib::Response& res) {
    const auto& crs = server_.crs();
    ReplyJson(res, 200, {{"fingerprint", crs.fingerprint.Hex()},
                         {"verification_key", ToHex(crs.verification_key)}});
  });

  http_->Get("/v1/proving-key", [this](const httplib::Request&,
                                       httplib::Response& res) {
    const auto& pk = server_.crs().proving_key;
    res.set_content(std::string(pk.begin(), pk.end()),
                    "application/octet-stream");
  });

  http_->Get("/v1/nullifiers", [this](const httplib::Request&,
                                      httplib::Response& res) {
    try {
      ReplyJson(res, 200, {{"nullifiers", HexList(nullifiers_())}});
    } catch (const std::exception& e) {
      ReplyJson(res, 503, {{"error", e.what()}});
    }
  });
}

uint16_t AuthHttpService::Start(const std::string& host, uint16_t port) {
  int bound = port == 0 ? http_->bind_to_any_port(host)
                        : (http_->bind_to_port(host, port) ? port : -1);
  if (bound <= 0) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  spdlog::info("authentication server listening on {}:{}", host, bound);
  return static_cast<uint16_t>(bound);
}

void AuthHttpService::Run(const std::string& host, uint16_t port) {
  spdlog::info("authentication server listening on {}:{}", host, port);
  if (!http_->listen(host, port)) {
    throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void AuthHttpService::Stop() {
  if (http_) http_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace anonkey::auth
