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

#include "anonkey/auth/auth_server.h"

#include <chrono>

#include <spdlog/spdlog.h>

#include "anonkey/core/certificate.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"

namespace anonkey::auth {
namespace {

constexpr uint8_t kRegistryVersion = 1;

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

Bytes RegistryState::Serialize() const {
  Bytes out = {kRegistryVersion};
  const Bytes t = tree.Serialize();
  AppendU64BE(out, t.size());
  Append(out, t);
  AppendU64BE(out, old_roots.size());
  for (const Digest& r : old_roots) Append(out, r.bytes);
  AppendU64BE(out, audit_log.size());
  for (const AuditRecord& a : audit_log) {
    AppendU32BE(out, static_cast<uint32_t>(a.subject_id.size()));
    Append(out, AsBytes(a.subject_id));
    Append(out, a.commitment.value.bytes);
    AppendU64BE(out, static_cast<uint64_t>(a.timestamp_ms));
  }
  return out;
}

RegistryState RegistryState::Parse(ByteSpan data) {
  ByteReader r(data);
  if (r.U8() != kRegistryVersion) throw ParseError("bad registry version");
  const uint64_t tree_len = r.U64BE();
  if (tree_len > r.remaining()) throw ParseError("truncated registry");
  RegistryState s{merkle::MerkleTree::Deserialize(r.Take(tree_len)), {}, {}};
  const uint64_t roots = r.U64BE();
  if (roots > r.remaining() / Digest::kSize) {
    throw ParseError("truncated registry");
  }
  for (uint64_t i = 0; i < roots; ++i) {
    s.old_roots.push_back(Digest::FromSpan(r.Take(Digest::kSize)));
  }
  const uint64_t records = r.U64BE();
  for (uint64_t i = 0; i < records; ++i) {
    AuditRecord a;
    const uint32_t len = r.U32BE();
    ByteSpan id = r.Take(len);
    a.subject_id.assign(id.begin(), id.end());
    a.commitment.value = Digest::FromSpan(r.Take(Digest::kSize));
    a.timestamp_ms = static_cast<int64_t>(r.U64BE());
    s.audit_log.push_back(std::move(a));
  }
  r.ExpectEnd();
  if (s.audit_log.size() != s.tree.next_free()) {
    throw ParseError("audit log does not match the tree");
  }
  return s;
}

std::string_view RegisterStatusName(RegisterStatus s) {
  switch (s) {
    case RegisterStatus::kAccepted:
      return "accepted";
    case RegisterStatus::kMalformed:
      return "malformed";
    case RegisterStatus::kBadCertificate:
      return "bad-certificate";
    case RegisterStatus::kBadSignature:
      return "bad-signature";
    case RegisterStatus::kDuplicate:
      return "duplicate-commitment";
    case RegisterStatus::kCapacity:
      return "tree-full";
  }
  return "unknown";
}

RegistryState LoadRegistry(const DataDir& dir) {
  return RegistryState::Parse(ReadFileBytes(dir.registry()));
}

AuthServer::AuthServer(DataDir dir, ServerConfig config, zkp::Crs crs,
                       RegistryState state)
    : dir_(std::move(dir)),
      config_(std::move(config)),
      crs_(std::move(crs)),
      state_(std::make_shared<const RegistryState>(std::move(state))) {}

std::unique_ptr<AuthServer> AuthServer::ServerSetup(
    const std::filesystem::path& root, const ServerConfig& config,
    bool reset) {
  config.Validate();
  DataDir dir{root};
  if (std::filesystem::exists(dir.config()) ||
      std::filesystem::exists(dir.registry())) {
    if (!reset) {
      throw PreconditionError("server state already exists in " +
                              root.string() + " (use reset to replace it)");
    }
    spdlog::warn("resetting server state in {}", root.string());
    for (const auto& p : {dir.registry(), dir.nullifier_log(),
                          dir.nullifier_snapshot(), dir.config()}) {
      std::filesystem::remove(p);
    }
    std::filesystem::remove_all(dir.crs());
  }
  std::filesystem::create_directories(root);

  zkp::Crs crs = zkp::Setup(config.backend, config.relation(),
                            {.test_seed = config.test_seed});
  crs.Save(dir.crs());
  RegistryState state{
      merkle::MerkleTree(config.protocol.hash_profile, config.depth), {}, {}};
  WriteFileAtomic(dir.registry(), state.Serialize());
  WriteFileAtomic(dir.nullifier_log(), Bytes{});
  WriteFileAtomic(dir.config(), AsBytes(config.ToJson()));
  spdlog::info("server initialized: {} backend, {}",
               zkp::BackendName(config.backend), config.relation().ToString());
  return std::unique_ptr<AuthServer>(
      new AuthServer(dir, config, std::move(crs), std::move(state)));
}

std::unique_ptr<AuthServer> AuthServer::Open(
    const std::filesystem::path& root) {
  DataDir dir{root};
  ServerConfig config = ServerConfig::FromJson(ReadFileText(dir.config()));
  zkp::Crs crs = zkp::Crs::Load(dir.crs());
  if (crs.fingerprint != zkp::CircuitFingerprint(config.relation())) {
    throw zkp::FingerprintMismatchError("CRS does not match server.json");
  }
  RegistryState state = LoadRegistry(dir);
  if (state.tree.depth() != config.depth ||
      state.tree.profile() != config.protocol.hash_profile) {
    throw ConfigError("registry does not match server.json");
  }
  return std::unique_ptr<AuthServer>(
      new AuthServer(dir, std::move(config), std::move(crs), std::move(state)));
}

std::shared_ptr<const RegistryState> AuthServer::Snapshot() const {
  std::lock_guard lock(snapshot_mu_);
  return state_;
}

RegisterResult AuthServer::Register(ByteSpan certificate,
                                    const Commitment& commitment,
                                    ByteSpan signature) {
  std::lock_guard write_lock(write_mu_);
  RegisterResult result;
  Certificate cert;
  try {
    cert = Certificate::Parse(certificate);
  } catch (const ParseError& e) {
    spdlog::info("register rejected: {}", e.what());
    result.status = RegisterStatus::kBadCertificate;
    return result;
  }
  if (!VerifyCertificate(cert, config_.ca_verify_key)) {
    result.status = RegisterStatus::kBadCertificate;
    spdlog::info("register rejected: certificate not issued by the CA");
    return result;
  }
  if (!VerifySignature(cert.subject_verify_key, commitment.value.bytes,
                       signature)) {
    result.status = RegisterStatus::kBadSignature;
    spdlog::info("register rejected: bad signature for subject {}",
                 cert.subject_id);
    return result;
  }

  const auto current = Snapshot();
  RegistryState next = *current;
  const Digest previous_root = next.tree.Root();
  try {
    next.tree.AddLeaf(commitment.value);
  } catch (const merkle::CapacityError&) {
    result.status = RegisterStatus::kCapacity;
    return result;
  } catch (const merkle::DuplicateLeafError&) {
    result.status = RegisterStatus::kDuplicate;
    return result;
  } catch (const ParseError&) {
    // Not a canonical digest for the algebraic profile.
    result.status = RegisterStatus::kMalformed;
    return result;
  }
  next.old_roots.push_back(previous_root);
  if (config_.old_roots_retention > 0 &&
      next.old_roots.size() > config_.old_roots_retention) {
    next.old_roots.erase(next.old_roots.begin(),
                         next.old_roots.end() - config_.old_roots_retention);
  }
  next.audit_log.push_back({cert.subject_id, commitment, NowMs()});

  // Persist first; the in-memory view only changes once the disk has.
  WriteFileAtomic(dir_.registry(), next.Serialize());
  result.new_root = next.tree.Root();
  result.status = RegisterStatus::kAccepted;
  const uint64_t index = next.tree.next_free() - 1;
  {
    std::lock_guard lock(snapshot_mu_);
    state_ = std::make_shared<const RegistryState>(std::move(next));
  }
  spdlog::info("registered leaf {} for subject {}", index, cert.subject_id);
  return result;
}

}  // namespace anonkey::auth
