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

#include "anonkey/client/user_store.h"

#include <bit>
#include <chrono>

namespace anonkey::client {
namespace {

constexpr char kMagic[4] = {'A', 'K', 'U', 'S'};
constexpr uint8_t kStoreVersion = 1;
constexpr size_t kSaltBytes = 16;
constexpr size_t kHeaderBytes = 4 + 1 + 3 + kSaltBytes;

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void AppendBlob(Bytes& out, ByteSpan b) {
  AppendU32BE(out, static_cast<uint32_t>(b.size()));
  Append(out, b);
}

Bytes ReadBlob(ByteReader& r) {
  const uint32_t n = r.U32BE();
  if (n > r.remaining()) throw ParseError("truncated note store");
  return r.TakeBytes(n);
}

NoteState StateFromByte(uint8_t b) {
  if (b < 1 || b > 3) throw ParseError("bad note state");
  return static_cast<NoteState>(b);
}

}  // namespace

std::string_view NoteStateName(NoteState s) {
  switch (s) {
    case NoteState::kCreated:
      return "created";
    case NoteState::kRegistered:
      return "registered";
    case NoteState::kSpent:
      return "spent";
  }
  return "unknown";
}

std::unique_ptr<UserStore> UserStore::Open(const std::filesystem::path& path,
                                           std::string_view passphrase,
                                           const ScryptParams& params) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto lock = std::make_unique<FileLock>(path.string() + ".lock");
  std::unique_ptr<UserStore> store(new UserStore(path, std::move(lock)));

  if (!std::filesystem::exists(path)) {
    if (!std::has_single_bit(params.n) || params.r > 255 || params.p > 255) {
      throw ConfigError("unsupported scrypt parameters");
    }
    store->params_ = params;
    store->salt_ = RandomBytes(kSaltBytes);
    store->key_ = SecretBytes(Scrypt(AsBytes(passphrase), store->salt_,
                                     params, kAeadKeyBytes));
    store->Save();
    return store;
  }

  const Bytes data = ReadFileBytes(path);
  ByteReader r(data);
  ByteSpan magic = r.Take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw ParseError("not a note store");
  }
  if (r.U8() != kStoreVersion) throw ParseError("unsupported store version");
  store->params_.n = uint64_t{1} << r.U8();
  store->params_.r = r.U8();
  store->params_.p = r.U8();
  store->salt_ = r.TakeBytes(kSaltBytes);
  const Bytes nonce = r.TakeBytes(kAeadNonceBytes);
  const ByteSpan sealed = r.Take(r.remaining());
  store->key_ = SecretBytes(Scrypt(AsBytes(passphrase), store->salt_,
                                   store->params_, kAeadKeyBytes));
  Bytes body;
  try {
    body = AeadOpen(AeadCipher::kAes256Gcm, store->key_.span(), nonce,
                    store->Header(), sealed);
  } catch (const DecryptionError&) {
    throw WrongPassphraseError("wrong passphrase or corrupted note store");
  }
  SecretBytes wiped(std::move(body));
  store->DecodeBody(wiped.span());
  return store;
}

Bytes UserStore::Header() const {
  Bytes h(kMagic, kMagic + 4);
  h.push_back(kStoreVersion);
  h.push_back(static_cast<uint8_t>(std::countr_zero(params_.n)));
  h.push_back(static_cast<uint8_t>(params_.r));
  h.push_back(static_cast<uint8_t>(params_.p));
  Append(h, salt_);
  return h;
}

Bytes UserStore::EncodeBody() const {
  Bytes out;
  AppendU32BE(out, static_cast<uint32_t>(records_.size()));
  for (const NoteRecord& rec : records_) {
    AppendBlob(out, AsBytes(rec.id));
    SecretBytes note(rec.note.Serialize());
    AppendBlob(out, note.span());
    out.push_back(static_cast<uint8_t>(rec.hash_profile));
    Append(out, rec.commitment.value.bytes);
    out.push_back(static_cast<uint8_t>(rec.state));
    out.push_back(rec.registered_root ? 1 : 0);
    if (rec.registered_root) Append(out, rec.registered_root->bytes);
    AppendU64BE(out, static_cast<uint64_t>(rec.created_ms));
  }
  AppendBlob(out, cached_tree_);
  AppendBlob(out, cached_vk_);
  return out;
}

void UserStore::DecodeBody(ByteSpan body) {
  ByteReader r(body);
  const uint32_t n = r.U32BE();
  for (uint32_t i = 0; i < n; ++i) {
    NoteRecord rec;
    Bytes id = ReadBlob(r);
    rec.id.assign(id.begin(), id.end());
    SecretBytes note(ReadBlob(r));
    rec.note = Note::Parse(note.span());
    rec.hash_profile = HashProfileFromByte(r.U8());
    rec.commitment.value = Digest::FromSpan(r.Take(Digest::kSize));
    rec.state = StateFromByte(r.U8());
    if (r.U8() != 0) rec.registered_root = Digest::FromSpan(r.Take(Digest::kSize));
    rec.created_ms = static_cast<int64_t>(r.U64BE());
    records_.push_back(std::move(rec));
  }
  cached_tree_ = ReadBlob(r);
  cached_vk_ = ReadBlob(r);
  r.ExpectEnd();
}

void UserStore::Save() {
  const Bytes nonce = RandomBytes(kAeadNonceBytes);
  SecretBytes body(EncodeBody());
  Bytes out = Header();
  Append(out, nonce);
  Append(out, AeadSeal(AeadCipher::kAes256Gcm, key_.span(), nonce, Header(),
                       body.span()));
  WriteFileAtomic(path_, out, 0600);
}

std::string UserStore::Add(Note note, HashProfile profile) {
  NoteRecord rec;
  rec.hash_profile = profile;
  rec.commitment = DeriveCommitment(note, Hasher(profile));
  // Local handle only; never leaves this machine.
  rec.id = rec.commitment.value.Hex().substr(0, 12);
  rec.note = std::move(note);
  rec.created_ms = NowMs();
  for (const auto& r : records_) {
    if (r.id == rec.id) throw PreconditionError("note already stored");
  }
  records_.push_back(std::move(rec));
  Save();
  return records_.back().id;
}

const NoteRecord& UserStore::Get(std::string_view id) const {
  for (const auto& r : records_) {
    if (r.id == id) return r;
  }
  throw PreconditionError("no note with id " + std::string(id));
}

NoteRecord& UserStore::Mutable(std::string_view id) {
  return const_cast<NoteRecord&>(Get(id));
}

const NoteRecord* UserStore::FindByPublicKey(ByteSpan pk) const {
  for (const auto& r : records_) {
    if (std::equal(r.note.pk.begin(), r.note.pk.end(), pk.begin(), pk.end())) {
      return &r;
    }
  }
  return nullptr;
}

std::vector<std::string> UserStore::ids() const {
  std::vector<std::string> out;
  for (const auto& r : records_) out.push_back(r.id);
  return out;
}

void UserStore::Advance(std::string_view id, NoteState next,
                        std::optional<Digest> root) {
  NoteRecord& rec = Mutable(id);
  if (static_cast<uint8_t>(next) != static_cast<uint8_t>(rec.state) + 1) {
    throw PreconditionError("note " + rec.id + " is " +
                            std::string(NoteStateName(rec.state)) +
                            ", cannot become " +
                            std::string(NoteStateName(next)));
  }
  rec.state = next;
  if (root) rec.registered_root = root;
  Save();
}

void UserStore::SetCachedTree(Bytes snapshot) {
  cached_tree_ = std::move(snapshot);
  Save();
}

void UserStore::SetCachedVerificationKey(Bytes vk) {
  cached_vk_ = std::move(vk);
  Save();
}

}  // namespace anonkey::client
