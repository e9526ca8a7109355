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

#ifndef ANONKEY_PVS_PVS_H_
#define ANONKEY_PVS_PVS_H_

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>

#include "anonkey/auth/server_config.h"
#include "anonkey/core/entropy.h"
#include "anonkey/core/kem.h"
#include "anonkey/pvs/nullifier_store.h"
#include "anonkey/pvs/registry_source.h"
#include "anonkey/tunnel/session.h"
#include "anonkey/tunnel/stream.h"
#include "anonkey/zkp/proving_system.h"

namespace anonkey::pvs {

// Outcome codes returned in-band to clients.
enum class Reason {
  kAccepted,
  kRootInvalid,
  kNullifierSpent,
  kProofInvalid,
  kMalformed,
  kKeySizeOutOfRange,
  kDeliveryFailed,
  kInternal,
};

std::string_view ReasonCode(Reason r);
std::optional<Reason> ParseReasonCode(std::string_view code);

inline constexpr size_t kDefaultMaxKeyBytes = 65536;

struct PvsOptions {
  size_t max_t = kDefaultMaxKeyBytes;
  // Background registry refresh; zero disables it.
  std::chrono::milliseconds sync_interval{0};
  // When set, delivery keys must belong to this KEM profile.
  std::optional<KemProfile> kem_profile;
  Bytes aid = tunnel::DefaultAid();
};

// Per-request phase durations of the last handled key request.
struct RequestTimings {
  std::chrono::nanoseconds validation{0};
  std::chrono::nanoseconds generation{0};
  std::chrono::nanoseconds encapsulation{0};
};

struct Health {
  bool stale = false;
  Digest root;
  size_t old_roots = 0;
  size_t nullifiers = 0;
  int64_t last_sync_ms = 0;
  EntropyKind entropy = EntropyKind::kOs;
  uint64_t entropy_bytes_served = 0;
};

class Pvs {
 public:
  // Performs an initial registry sync; a failing source marks the view
  // stale instead of throwing.
  Pvs(zkp::Verifier verifier, std::unique_ptr<RegistrySource> registry,
      std::shared_ptr<EntropySource> entropy,
      std::unique_ptr<NullifierStore> nullifiers, PvsOptions options = {});
  ~Pvs();

  // Verifier, nullifier store and config from a shared data directory. The
  // registry defaults to the same directory.
  static std::unique_ptr<Pvs> OpenShared(
      const auth::DataDir& dir, std::shared_ptr<EntropySource> entropy,
      PvsOptions options = {},
      std::unique_ptr<RegistrySource> registry = nullptr);

  // Refreshes root and old roots. Returns false (keeping the last view and
  // flagging staleness) if the source fails.
  bool SyncRegistry();

  // Root check, then nullifier check, then proof check. On acceptance the
  // nullifier is recorded atomically with the decision; rejections leave
  // the store unchanged.
  Reason VerifyProof(ByteSpan proof, const zkp::Statement& x);

  // Draws exactly t bytes, encapsulates them under pk and wipes the
  // plaintext. Throws PreconditionError for t outside [1, max_t] and
  // ParseError for a bad pk; entropy failures propagate as EntropyError.
  EncapsulatedKey DeliverKey(size_t t, ByteSpan pk);

  // Tunnel handler: key request message in, key delivery or error message
  // out. Parameters are validated before the proof, so a bad t never spends
  // a nullifier.
  Bytes HandleKeyRequest(const Bytes& message,
                         RequestTimings* timings = nullptr);

  // Runs one reader session on `stream`. Transport failures are logged; a
  // drop after validation is a delivery failure and the nullifier stays
  // spent.
  void ServeConnection(tunnel::FrameStream& stream,
                       tunnel::SessionTimings* timings = nullptr);
  // Accept loop; one thread per connection. Returns when `listener` closes.
  void Serve(tunnel::TcpListener& listener);

  Health health() const;
  const NullifierStore& nullifiers() const { return *nullifiers_; }
  const PvsOptions& options() const { return options_; }

 private:
  void SyncLoop();

  zkp::Verifier verifier_;
  std::unique_ptr<RegistrySource> registry_;
  std::shared_ptr<EntropySource> entropy_;
  std::unique_ptr<NullifierStore> nullifiers_;
  PvsOptions options_;

  mutable std::mutex view_mu_;
  Digest root_;
  std::set<Digest> old_roots_;
  bool stale_ = true;
  int64_t last_sync_ms_ = 0;

  std::mutex sync_mu_;
  std::condition_variable sync_cv_;
  bool stopping_ = false;
  std::thread sync_thread_;

  std::mutex conn_mu_;
  std::vector<std::thread> connections_;
};

}  // namespace anonkey::pvs

#endif  // ANONKEY_PVS_PVS_H_
