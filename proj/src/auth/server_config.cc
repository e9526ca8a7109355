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

#include "anonkey/auth/server_config.h"

#include "anonkey/core/certificate.h"
#include "anonkey/core/errors.h"
#include "json.hpp"

namespace anonkey::auth {

using nlohmann::json;

zkp::RelationConfig ServerConfig::relation() const {
  zkp::RelationConfig r;
  r.hash_profile = protocol.hash_profile;
  r.depth = depth;
  r.lambda = protocol.lambda;
  r.kem_profile = protocol.kem_profile;
  return r;
}

void ServerConfig::Validate() const {
  protocol.Validate();
  relation().Validate();
  if (ca_verify_key.size() != kVerifyKeyBytes) {
    throw ConfigError("ca_verify_key must be 32 bytes");
  }
}

std::string ServerConfig::ToJson() const {
  json j = json::parse(protocol.ToJson());
  j["depth"] = depth;
  j["backend"] = std::string(zkp::BackendName(backend));
  j["ca_verify_key"] = ToHex(ca_verify_key);
  j["old_roots_retention"] = old_roots_retention;
  if (test_seed) j["test_seed"] = *test_seed;
  return j.dump(2) + "\n";
}

ServerConfig ServerConfig::FromJson(const std::string& text) {
  ServerConfig c;
  try {
    json j = json::parse(text);
    json proto = json::object();
    for (const char* key : {"hash_profile", "kem_profile", "lambda"}) {
      if (j.contains(key)) proto[key] = j[key];
    }
    c.protocol = ProtocolConfig::FromJson(proto.dump());
    c.depth = j.value("depth", 8u);
    c.backend = zkp::ParseBackendKind(j.value("backend", "groth16"));
    c.ca_verify_key = FromHex(j.at("ca_verify_key").get<std::string>());
    c.old_roots_retention = j.value("old_roots_retention", size_t{0});
    if (j.contains("test_seed")) c.test_seed = j["test_seed"].get<uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("server config: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("server config: ") + e.what());
  }
  c.Validate();
  return c;
}

}  // namespace anonkey::auth
