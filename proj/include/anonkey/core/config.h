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

#ifndef ANONKEY_CORE_CONFIG_H_
#define ANONKEY_CORE_CONFIG_H_

#include <filesystem>
#include <string>

#include "anonkey/core/hash.h"
#include "anonkey/core/kem.h"

namespace anonkey {

// Protocol-wide parameters. Every party must agree on these.
struct ProtocolConfig {
  HashProfile hash_profile = HashProfile::kAlgebraic;
  KemProfile kem_profile = KemProfile::kDhkem;
  unsigned lambda = 256;

  // Throws ConfigError for unsupported combinations.
  void Validate() const;

  // JSON object with keys "hash_profile", "kem_profile", "lambda". Missing
  // keys keep their defaults; unknown keys are rejected.
  static ProtocolConfig FromJson(const std::string& text);
  static ProtocolConfig Load(const std::filesystem::path& path);
  std::string ToJson() const;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_CONFIG_H_
