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

#ifndef ANONKEY_PVS_NULLIFIER_STORE_H_
#define ANONKEY_PVS_NULLIFIER_STORE_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <set>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/note.h"

namespace anonkey::pvs {

// What the validation server keeps per redemption. Nothing else is stored.
struct NullifierRecord {
  Nullifier nullifier;
  Digest root;
  Bytes proof;
  int64_t timestamp_ms = 0;

  void AppendTo(Bytes& out) const;
  // Throws ParseError.
  static NullifierRecord ReadFrom(ByteReader& r);
  friend bool operator==(const NullifierRecord&,
                         const NullifierRecord&) = default;
};

// Spent-nullifier list: an fsync'd append-only log, periodically compacted
// into a snapshot sorted by nullifier. Membership is answered from memory.
class NullifierStore {
 public:
  // Loads snapshot and log. `compact_every` appended records trigger a
  // compaction; 0 disables it.
  NullifierStore(std::filesystem::path log_path,
                 std::filesystem::path snapshot_path,
                 size_t compact_every = 4096);

  bool Contains(const Nullifier& n) const;
  // Atomic check-and-insert. Returns false, leaving the store unchanged, if
  // the nullifier is already present. The record is durable on return.
  bool TryInsert(const NullifierRecord& record);

  size_t size() const;
  std::vector<NullifierRecord> Records() const;
  std::vector<Digest> Nullifiers() const;

  void Compact();

 private:
  void CompactLocked();

  std::filesystem::path log_path_;
  std::filesystem::path snapshot_path_;
  size_t compact_every_;
  size_t appended_since_compact_ = 0;
  mutable std::mutex mu_;
  std::set<Nullifier> set_;
  std::vector<NullifierRecord> records_;
};

// Reads the records of a store owned by another process. A truncated final
// log record (interrupted append) is ignored.
std::vector<NullifierRecord> ReadNullifierRecords(
    const std::filesystem::path& log_path,
    const std::filesystem::path& snapshot_path);

}  // namespace anonkey::pvs

#endif  // ANONKEY_PVS_NULLIFIER_STORE_H_
