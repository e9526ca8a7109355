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

#ifndef ANONKEY_CLIENT_USER_STORE_H_
#define ANONKEY_CLIENT_USER_STORE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/note.h"
#include "anonkey/core/symmetric.h"

namespace anonkey::client {

// Forward-only: created -> registered -> spent.
enum class NoteState : uint8_t { kCreated = 1, kRegistered = 2, kSpent = 3 };

std::string_view NoteStateName(NoteState s);

class WrongPassphraseError : public DecryptionError {
 public:
  using DecryptionError::DecryptionError;
};

struct NoteRecord {
  std::string id;
  Note note;
  HashProfile hash_profile = HashProfile::kAlgebraic;
  Commitment commitment;
  NoteState state = NoteState::kCreated;
  // Root returned by the registration server on acceptance.
  std::optional<Digest> registered_root;
  int64_t created_ms = 0;
};

// Note wallet, encrypted at rest with AES-256-GCM under a scrypt-derived
// key. Holds an exclusive lock file for its lifetime.
class UserStore {
 public:
  // Opens `path`, creating an empty store if it does not exist. Throws
  // IoError when locked, WrongPassphraseError on a bad passphrase and
  // ParseError on corruption. `params` only applies to new stores.
  static std::unique_ptr<UserStore> Open(const std::filesystem::path& path,
                                         std::string_view passphrase,
                                         const ScryptParams& params = {});

  // Adds a note in the created state and saves. Returns its id.
  std::string Add(Note note, HashProfile profile);
  // Throws PreconditionError for unknown ids.
  const NoteRecord& Get(std::string_view id) const;
  const NoteRecord* FindByPublicKey(ByteSpan pk) const;
  std::vector<std::string> ids() const;

  // Moves a note strictly forward and saves. Throws PreconditionError on
  // any other transition.
  void Advance(std::string_view id, NoteState next,
               std::optional<Digest> root = std::nullopt);

  void SetCachedTree(Bytes snapshot);
  const Bytes& cached_tree() const { return cached_tree_; }
  void SetCachedVerificationKey(Bytes vk);
  const Bytes& cached_verification_key() const { return cached_vk_; }

  void Save();
  const std::filesystem::path& path() const { return path_; }

 private:
  UserStore(std::filesystem::path path, std::unique_ptr<FileLock> lock)
      : path_(std::move(path)), lock_(std::move(lock)) {}

  Bytes Header() const;
  Bytes EncodeBody() const;
  void DecodeBody(ByteSpan body);
  NoteRecord& Mutable(std::string_view id);

  std::filesystem::path path_;
  std::unique_ptr<FileLock> lock_;
  ScryptParams params_;
  Bytes salt_;
  SecretBytes key_;
  std::vector<NoteRecord> records_;
  Bytes cached_tree_;
  Bytes cached_vk_;
};

}  // namespace anonkey::client

#endif  // ANONKEY_CLIENT_USER_STORE_H_
