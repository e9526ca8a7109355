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

#ifndef ANONKEY_AUTH_SERVER_CONFIG_H_
#define ANONKEY_AUTH_SERVER_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "anonkey/core/bytes.h"
#include "anonkey/core/config.h"
#include "anonkey/zkp/proving_system.h"
#include "anonkey/zkp/relation.h"

namespace anonkey::auth {

// Deployment parameters shared by the authentication and validation
// servers, stored as server.json in the data directory.
struct ServerConfig {
  ProtocolConfig protocol;
  unsigned depth = 8;
  zkp::BackendKind backend = zkp::BackendKind::kGroth16;
  // Ed25519 key of the certificate authority trusted for registration.
  Bytes ca_verify_key;
  // Number of previous roots kept; 0 keeps all of them. Proofs against an
  // evicted root are rejected.
  size_t old_roots_retention = 0;
  // Deterministic CRS trapdoors (test mode only).
  std::optional<uint64_t> test_seed;

  zkp::RelationConfig relation() const;
  // Throws ConfigError.
  void Validate() const;
  std::string ToJson() const;
  static ServerConfig FromJson(const std::string& text);
};

// Layout of the shared data directory.
struct DataDir {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "server.json"; }
  std::filesystem::path crs() const { return root / "crs"; }
  std::filesystem::path registry() const { return root / "registry.bin"; }
  std::filesystem::path nullifier_log() const {
    return root / "nullifiers.log";
  }
  std::filesystem::path nullifier_snapshot() const {
    return root / "nullifiers.snap";
  }
};

}  // namespace anonkey::auth

#endif  // ANONKEY_AUTH_SERVER_CONFIG_H_
