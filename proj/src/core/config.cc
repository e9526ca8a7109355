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

#include "anonkey/core/config.h"

#include <fstream>
#include <sstream>

#include "anonkey/core/errors.h"
#include "json.hpp"

namespace anonkey {

void ProtocolConfig::Validate() const {
  if (!IsSupportedLambda(lambda)) {
    throw ConfigError("lambda must be 128, 192 or 256");
  }
  if (kem_profile == KemProfile::kRsaOaep && lambda != 128) {
    throw ConfigError("rsa-oaep profile requires lambda 128");
  }
}

ProtocolConfig ProtocolConfig::FromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ProtocolConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "hash_profile" && value.is_string()) {
      c.hash_profile = ParseHashProfile(value.get<std::string>());
    } else if (key == "kem_profile" && value.is_string()) {
      c.kem_profile = ParseKemProfile(value.get<std::string>());
    } else if (key == "lambda" && value.is_number_unsigned()) {
      c.lambda = value.get<unsigned>();
    } else {
      throw ConfigError("bad config key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

ProtocolConfig ProtocolConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

std::string ProtocolConfig::ToJson() const {
  nlohmann::json j = {
      {"hash_profile", std::string(HashProfileName(hash_profile))},
      {"kem_profile", std::string(KemProfileName(kem_profile))},
      {"lambda", lambda},
  };
  return j.dump(2);
}

}  // namespace anonkey
