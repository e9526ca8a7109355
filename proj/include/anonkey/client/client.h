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

#ifndef ANONKEY_CLIENT_CLIENT_H_
#define ANONKEY_CLIENT_CLIENT_H_

#include <chrono>
#include <filesystem>
#include <string>

#include "anonkey/client/user_store.h"
#include "anonkey/core/certificate.h"
#include "anonkey/core/config.h"
#include "anonkey/core/entropy.h"
#include "anonkey/merkle/merkle_tree.h"
#include "anonkey/tunnel/envelope.h"
#include "anonkey/tunnel/session.h"
#include "anonkey/tunnel/stream.h"
#include "anonkey/zkp/proving_system.h"

namespace anonkey::client {

// Process exit codes of the command line client.
enum class ExitCode : int {
  kOk = 0,
  kLocal = 1,
  kAuthServer = 2,
  kValidationServer = 3,
  kUsage = 4,
};

// Failure attributed to one side, with the server's reason code when there
// is one.
class ClientError : public Error {
 public:
  ClientError(ExitCode code, std::string reason, const std::string& what)
      : Error(what), code_(code), reason_(std::move(reason)) {}
  ExitCode code() const { return code_; }
  const std::string& reason() const { return reason_; }

 private:
  ExitCode code_;
  std::string reason_;
};

struct RegisterResponse {
  bool accepted = false;
  std::string reason;
  Digest new_root;
};

// HTTP client for the registration server. Network failures throw
// ClientError with kAuthServer.
class AsClient {
 public:
  explicit AsClient(std::string base_url) : url_(std::move(base_url)) {}

  RegisterResponse Register(ByteSpan certificate, const Commitment& c,
                            ByteSpan signature) const;
  // Rebuilds the tree from the snapshot and checks it against the
  // advertised root.
  merkle::MerkleTree FetchTree() const;
  Bytes FetchVerificationKey() const;
  Bytes FetchProvingKey() const;

 private:
  std::string url_;
};

struct KeyResult {
  SecretBytes key;
  // Card-side wall time of the tunnel session.
  std::chrono::nanoseconds session{0};
};

class Client {
 public:
  explicit Client(UserStore& store) : store_(store) {}

  // Creates a note and returns its id.
  std::string Init(const ProtocolConfig& protocol, EntropySource& entropy);

  // Signs the commitment with the certificate's key and registers it. The
  // note must be in the created state; it stays there unless accepted.
  RegisterResponse Auth(std::string_view id, ByteSpan certificate,
                        const SecretBytes& signing_key, const AsClient& as);

  // Proves membership against `tree`, which must contain the commitment.
  // Does not change the note state.
  tunnel::KeyRequest Prove(std::string_view id, const merkle::MerkleTree& tree,
                           const zkp::Prover& prover);
  // Refetches the tree from the server first and caches it.
  tunnel::KeyRequest Prove(std::string_view id, const AsClient& as,
                           const zkp::Prover& prover);

  // Card side of a key request session on `stream`. Requires the bundle's
  // note in this store in the registered state. Marks it spent on delivery
  // and on nullifier-spent / delivery-failed answers.
  KeyResult RequestKey(const tunnel::KeyRequest& bundle, uint32_t t,
                       tunnel::FrameStream& stream);

 private:
  UserStore& store_;
};

// Writes key bytes with owner-only permissions.
void WriteKeyFile(const std::filesystem::path& path, const SecretBytes& key);

}  // namespace anonkey::client

#endif  // ANONKEY_CLIENT_CLIENT_H_
