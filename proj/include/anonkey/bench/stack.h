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

#ifndef ANONKEY_BENCH_STACK_H_
#define ANONKEY_BENCH_STACK_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "anonkey/auth/auth_server.h"
#include "anonkey/core/certificate.h"
#include "anonkey/core/entropy.h"
#include "anonkey/pvs/pvs.h"
#include "anonkey/tunnel/envelope.h"
#include "anonkey/tunnel/session.h"
#include "anonkey/tunnel/stream.h"

namespace anonkey::bench {

struct StackOptions {
  zkp::BackendKind backend = zkp::BackendKind::kGroth16;
  HashProfile hash_profile = HashProfile::kAlgebraic;
  unsigned depth = 8;
  unsigned lambda = 256;
  KemProfile kem = KemProfile::kDhkem;
  // Drives the CRS trapdoors and the validation server's mock stream; user
  // notes and the CA come from a stream derived from it.
  uint64_t seed = 1;
  // Defaults to a mock source seeded with `seed`.
  std::optional<EntropyConfig> pvs_entropy;
  size_t max_t = pvs::kDefaultMaxKeyBytes;
  size_t old_roots_retention = 0;
};

// Registration server, validation server and a certificate authority in
// one process, over a temporary data directory.
class Stack {
 public:
  struct User {
    std::string subject;
    SigningKeyPair keys;
    Certificate cert;
    Note note;
    Commitment commitment;
  };

  struct Redemption {
    tunnel::TunnelMessage reply;
    tunnel::SessionTimings session;
    pvs::RequestTimings request;
    bool delivered() const {
      return reply.kind == tunnel::MessageKind::kKeyDelivery;
    }
    // Reason code, or "delivered".
    std::string outcome() const;
  };

  explicit Stack(const StackOptions& options);
  ~Stack();
  Stack(const Stack&) = delete;
  Stack& operator=(const Stack&) = delete;

  // A certified user with a fresh note, not yet registered.
  User NewUser();
  bool Register(const User& u);
  // NewUser + Register; throws if the registration is refused.
  User AddUser();

  // Honest proof against the registration server's current tree.
  tunnel::KeyRequest Prove(const User& u, uint32_t t) const;
  tunnel::KeyRequest Prove(const User& u, uint32_t t,
                           const merkle::MerkleTree& tree) const;

  // One full tunnel session over an in-process pipe. `bytes_per_second`
  // throttles the reader side of the link (0 = unlimited).
  Redemption Redeem(const tunnel::KeyRequest& req,
                    double bytes_per_second = 0,
                    std::shared_ptr<tunnel::Transcript> transcript = nullptr);
  // Same validation path without the tunnel.
  tunnel::TunnelMessage Submit(const tunnel::KeyRequest& req);

  void Sync() { pvs_->SyncRegistry(); }

  const StackOptions& options() const { return options_; }
  zkp::RelationConfig relation() const;
  auth::AuthServer& as() { return *as_; }
  pvs::Pvs& pvs() { return *pvs_; }
  const zkp::Prover& prover() const { return *prover_; }
  const zkp::Verifier& verifier() const { return *verifier_; }
  EntropySource& user_entropy() { return user_entropy_; }
  const EntropySource& pvs_entropy() const { return *pvs_entropy_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  StackOptions options_;
  std::filesystem::path dir_;
  MockEntropySource user_entropy_;
  std::optional<TestCa> ca_;
  std::unique_ptr<auth::AuthServer> as_;
  std::shared_ptr<EntropySource> pvs_entropy_;
  std::unique_ptr<pvs::Pvs> pvs_;
  std::optional<zkp::Prover> prover_;
  std::optional<zkp::Verifier> verifier_;
  uint64_t next_user_ = 0;
};

}  // namespace anonkey::bench

#endif  // ANONKEY_BENCH_STACK_H_
