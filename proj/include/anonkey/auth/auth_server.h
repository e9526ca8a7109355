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

#ifndef ANONKEY_AUTH_AUTH_SERVER_H_
#define ANONKEY_AUTH_AUTH_SERVER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "anonkey/auth/server_config.h"
#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/note.h"
#include "anonkey/merkle/merkle_tree.h"
#include "anonkey/zkp/proving_system.h"

namespace anonkey::auth {

struct AuditRecord {
  std::string subject_id;
  Commitment commitment;
  int64_t timestamp_ms = 0;
  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

// Everything the authentication server persists, as one immutable value.
struct RegistryState {
  merkle::MerkleTree tree;
  // old_roots[k] is the root just before the (k+1)-th registration (minus
  // any evicted by the retention limit).
  std::vector<Digest> old_roots;
  std::vector<AuditRecord> audit_log;

  Bytes Serialize() const;
  static RegistryState Parse(ByteSpan data);
};

enum class RegisterStatus {
  kAccepted,
  kMalformed,
  kBadCertificate,
  kBadSignature,
  kDuplicate,
  kCapacity,
};

std::string_view RegisterStatusName(RegisterStatus s);

struct RegisterResult {
  RegisterStatus status = RegisterStatus::kMalformed;
  Digest new_root;
  bool accepted() const { return status == RegisterStatus::kAccepted; }
};

class AuthServer {
 public:
  // Creates the data directory: CRS, empty tree, empty root and nullifier
  // lists. Throws PreconditionError if state exists and `reset` is false.
  static std::unique_ptr<AuthServer> ServerSetup(
      const std::filesystem::path& dir, const ServerConfig& config,
      bool reset = false);
  // Loads an initialized directory. Throws IoError / ParseError.
  static std::unique_ptr<AuthServer> Open(const std::filesystem::path& dir);

  // Verifies the certificate under the configured CA and `signature` over
  // the commitment bytes under the certificate's key, then appends. Failed
  // registrations leave memory and disk untouched. Thread-safe; calls are
  // serialized.
  RegisterResult Register(ByteSpan certificate, const Commitment& commitment,
                          ByteSpan signature);

  // Consistent view; never torn by a concurrent Register.
  std::shared_ptr<const RegistryState> Snapshot() const;
  Digest Root() const { return Snapshot()->tree.Root(); }

  const ServerConfig& config() const { return config_; }
  const zkp::Crs& crs() const { return crs_; }
  const DataDir& data_dir() const { return dir_; }

 private:
  AuthServer(DataDir dir, ServerConfig config, zkp::Crs crs,
             RegistryState state);

  DataDir dir_;
  ServerConfig config_;
  zkp::Crs crs_;
  std::mutex write_mu_;
  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const RegistryState> state_;
};

// Reads registry.bin directly, for processes sharing the data directory.
RegistryState LoadRegistry(const DataDir& dir);

}  // namespace anonkey::auth

#endif  // ANONKEY_AUTH_AUTH_SERVER_H_
