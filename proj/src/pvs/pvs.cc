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

#include "anonkey/pvs/pvs.h"

#include <spdlog/spdlog.h>

#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"
#include "anonkey/tunnel/envelope.h"

namespace anonkey::pvs {
namespace {

using Clock = std::chrono::steady_clock;

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

constexpr std::pair<Reason, std::string_view> kCodes[] = {
    {Reason::kAccepted, "accepted"},
    {Reason::kRootInvalid, "root-invalid"},
    {Reason::kNullifierSpent, "nullifier-spent"},
    {Reason::kProofInvalid, "proof-invalid"},
    {Reason::kMalformed, "malformed"},
    {Reason::kKeySizeOutOfRange, "key-size-out-of-range"},
    {Reason::kDeliveryFailed, "delivery-failed"},
    {Reason::kInternal, "internal"},
};

Bytes ErrorMessage(Reason r) {
  const uint16_t sw = r == Reason::kMalformed ? tunnel::kSwWrongLength
                                              : tunnel::kSwConditionsNotSatisfied;
  return tunnel::TunnelMessage::Error(sw, std::string(ReasonCode(r))).Encode();
}

std::string Short(const Digest& d) { return d.Hex().substr(0, 16); }

}  // namespace

std::string_view ReasonCode(Reason r) {
  for (const auto& [reason, code] : kCodes) {
    if (reason == r) return code;
  }
  return "internal";
}

std::optional<Reason> ParseReasonCode(std::string_view code) {
  for (const auto& [reason, c] : kCodes) {
    if (c == code) return reason;
  }
  return std::nullopt;
}

Pvs::Pvs(zkp::Verifier verifier, std::unique_ptr<RegistrySource> registry,
         std::shared_ptr<EntropySource> entropy,
         std::unique_ptr<NullifierStore> nullifiers, PvsOptions options)
    : verifier_(std::move(verifier)),
      registry_(std::move(registry)),
      entropy_(std::move(entropy)),
      nullifiers_(std::move(nullifiers)),
      options_(std::move(options)) {
  if (options_.max_t == 0) throw ConfigError("max_t must be positive");
  SyncRegistry();
  if (options_.sync_interval.count() > 0) {
    sync_thread_ = std::thread([this] { SyncLoop(); });
  }
}

Pvs::~Pvs() {
  {
    std::lock_guard lock(sync_mu_);
    stopping_ = true;
  }
  sync_cv_.notify_all();
  if (sync_thread_.joinable()) sync_thread_.join();
  std::lock_guard lock(conn_mu_);
  for (auto& t : connections_) {
    if (t.joinable()) t.join();
  }
}

std::unique_ptr<Pvs> Pvs::OpenShared(const auth::DataDir& dir,
                                     std::shared_ptr<EntropySource> entropy,
                                     PvsOptions options,
                                     std::unique_ptr<RegistrySource> registry) {
  const auth::ServerConfig config =
      auth::ServerConfig::FromJson(ReadFileText(dir.config()));
  zkp::Verifier verifier = zkp::Verifier::Load(
      ReadFileBytes(dir.crs() / zkp::kVerificationKeyFile));
  if (verifier.info().config != config.relation()) {
    throw zkp::FingerprintMismatchError(
        "verification key does not match server.json");
  }
  if (!options.kem_profile) options.kem_profile = config.protocol.kem_profile;
  if (!registry) registry = MakeSharedDirRegistry(dir);
  auto store = std::make_unique<NullifierStore>(dir.nullifier_log(),
                                                dir.nullifier_snapshot());
  return std::make_unique<Pvs>(std::move(verifier), std::move(registry),
                               std::move(entropy), std::move(store),
                               std::move(options));
}

bool Pvs::SyncRegistry() {
  RegistryView v;
  try {
    v = registry_->Fetch();
  } catch (const std::exception& e) {
    spdlog::warn("registry sync failed, keeping last view: {}", e.what());
    std::lock_guard lock(view_mu_);
    stale_ = true;
    return false;
  }
  std::lock_guard lock(view_mu_);
  root_ = v.root;
  old_roots_ = std::set<Digest>(v.old_roots.begin(), v.old_roots.end());
  stale_ = false;
  last_sync_ms_ = NowMs();
  return true;
}

void Pvs::SyncLoop() {
  std::unique_lock lock(sync_mu_);
  while (!stopping_) {
    if (sync_cv_.wait_for(lock, options_.sync_interval,
                          [this] { return stopping_; })) {
      break;
    }
    lock.unlock();
    SyncRegistry();
    lock.lock();
  }
}

Reason Pvs::VerifyProof(ByteSpan proof, const zkp::Statement& x) {
  {
    std::lock_guard lock(view_mu_);
    if (x.root != root_ && old_roots_.count(x.root) == 0) {
      return Reason::kRootInvalid;
    }
  }
  if (nullifiers_->Contains(x.nullifier)) return Reason::kNullifierSpent;
  const zkp::VerifyResult r = verifier_.Verify(x, proof);
  if (!r.accepted) {
    spdlog::info("proof rejected: {}", r.diagnostic);
    return Reason::kProofInvalid;
  }
  // Second check inside the store's critical section: of two concurrent
  // requests with the same nullifier only one insert succeeds.
  NullifierRecord record{x.nullifier, x.root, Bytes(proof.begin(), proof.end()),
                         NowMs()};
  if (!nullifiers_->TryInsert(record)) return Reason::kNullifierSpent;
  spdlog::info("accepted nullifier {}", Short(x.nullifier.value));
  return Reason::kAccepted;
}

EncapsulatedKey Pvs::DeliverKey(size_t t, ByteSpan pk) {
  if (t < 1 || t > options_.max_t) {
    throw PreconditionError("requested key size out of range");
  }
  KemValidatePublicKey(pk);
  SecretBytes key = entropy_->Draw(t);
  return KemEncap(key.span(), pk);
}

Bytes Pvs::HandleKeyRequest(const Bytes& message, RequestTimings* timings) {
  tunnel::KeyRequest req;
  try {
    const auto msg = tunnel::TunnelMessage::Decode(message);
    if (msg.kind != tunnel::MessageKind::kKeyRequest) {
      return ErrorMessage(Reason::kMalformed);
    }
    req = tunnel::KeyRequest::Parse(msg.payload);
  } catch (const ParseError& e) {
    spdlog::info("malformed key request: {}", e.what());
    return ErrorMessage(Reason::kMalformed);
  }
  if (req.t < 1 || req.t > options_.max_t) {
    return ErrorMessage(Reason::kKeySizeOutOfRange);
  }
  try {
    KemValidatePublicKey(req.pk);
    if (options_.kem_profile && KemProfileOfKey(req.pk) != *options_.kem_profile) {
      return ErrorMessage(Reason::kMalformed);
    }
  } catch (const ParseError&) {
    return ErrorMessage(Reason::kMalformed);
  }

  auto t0 = Clock::now();
  const Reason verdict = VerifyProof(req.proof, req.statement);
  auto t1 = Clock::now();
  if (timings) timings->validation = t1 - t0;
  if (verdict != Reason::kAccepted) {
    spdlog::info("key request rejected: {}", ReasonCode(verdict));
    return ErrorMessage(verdict);
  }

  try {
    SecretBytes key = entropy_->Draw(req.t);
    auto t2 = Clock::now();
    EncapsulatedKey enc = KemEncap(key.span(), req.pk);
    auto t3 = Clock::now();
    if (timings) {
      timings->generation = t2 - t1;
      timings->encapsulation = t3 - t2;
    }
    return tunnel::TunnelMessage{tunnel::MessageKind::kKeyDelivery,
                                 std::move(enc.ciphertext)}
        .Encode();
  } catch (const std::exception& e) {
    spdlog::error(
        "delivery failed after accepting nullifier {}: {}; the nullifier "
        "stays spent",
        Short(req.statement.nullifier.value), e.what());
    return ErrorMessage(Reason::kDeliveryFailed);
  }
}

void Pvs::ServeConnection(tunnel::FrameStream& stream,
                          tunnel::SessionTimings* timings) {
  bool handled = false;
  try {
    auto t = tunnel::RunReaderSession(
        stream, options_.aid,
        [this](const Bytes& m) { return HandleKeyRequest(m); }, &handled);
    if (timings) *timings = t;
  } catch (const std::exception& e) {
    if (handled) {
      spdlog::error("link lost during delivery ({}); nullifier stays spent",
                    e.what());
    } else {
      spdlog::info("session aborted before validation: {}", e.what());
    }
  }
  stream.Close();
}

void Pvs::Serve(tunnel::TcpListener& listener) {
  for (;;) {
    std::unique_ptr<tunnel::FrameStream> conn = listener.Accept();
    if (!conn) return;
    conn->SetReceiveTimeout(std::chrono::seconds(30));
    std::lock_guard lock(conn_mu_);
    connections_.emplace_back(
        [this, c = std::shared_ptr<tunnel::FrameStream>(std::move(conn))] {
          ServeConnection(*c);
        });
  }
}

Health Pvs::health() const {
  Health h;
  {
    std::lock_guard lock(view_mu_);
    h.stale = stale_;
    h.root = root_;
    h.old_roots = old_roots_.size();
    h.last_sync_ms = last_sync_ms_;
  }
  h.nullifiers = nullifiers_->size();
  h.entropy = entropy_->kind();
  h.entropy_bytes_served = entropy_->bytes_served();
  return h;
}

}  // namespace anonkey::pvs
