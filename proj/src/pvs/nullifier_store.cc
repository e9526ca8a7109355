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

#include "anonkey/pvs/nullifier_store.h"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"

namespace anonkey::pvs {
namespace {

constexpr uint8_t kSnapshotVersion = 1;
// Proofs larger than this are not produced by any backend.
constexpr uint32_t kMaxProofBytes = 1 << 16;

std::vector<NullifierRecord> ReadSnapshot(const std::filesystem::path& p) {
  std::vector<NullifierRecord> out;
  if (!std::filesystem::exists(p)) return out;
  Bytes data = ReadFileBytes(p);
  ByteReader r(data);
  if (r.U8() != kSnapshotVersion) {
    throw ParseError("unsupported nullifier snapshot version");
  }
  const uint64_t n = r.U64BE();
  for (uint64_t i = 0; i < n; ++i) out.push_back(NullifierRecord::ReadFrom(r));
  r.ExpectEnd();
  return out;
}

std::vector<NullifierRecord> ReadLog(const std::filesystem::path& p) {
  std::vector<NullifierRecord> out;
  if (!std::filesystem::exists(p)) return out;
  Bytes data = ReadFileBytes(p);
  ByteReader r(data);
  while (!r.empty()) {
    try {
      out.push_back(NullifierRecord::ReadFrom(r));
    } catch (const ParseError&) {
      spdlog::warn("ignoring truncated record at the end of {}", p.string());
      break;
    }
  }
  return out;
}

}  // namespace

void NullifierRecord::AppendTo(Bytes& out) const {
  Append(out, nullifier.value.bytes);
  Append(out, root.bytes);
  AppendU64BE(out, static_cast<uint64_t>(timestamp_ms));
  AppendU32BE(out, static_cast<uint32_t>(proof.size()));
  Append(out, proof);
}

NullifierRecord NullifierRecord::ReadFrom(ByteReader& r) {
  NullifierRecord rec;
  rec.nullifier.value = Digest::FromSpan(r.Take(Digest::kSize));
  rec.root = Digest::FromSpan(r.Take(Digest::kSize));
  rec.timestamp_ms = static_cast<int64_t>(r.U64BE());
  const uint32_t len = r.U32BE();
  if (len > kMaxProofBytes) throw ParseError("oversized proof record");
  rec.proof = r.TakeBytes(len);
  return rec;
}

std::vector<NullifierRecord> ReadNullifierRecords(
    const std::filesystem::path& log_path,
    const std::filesystem::path& snapshot_path) {
  std::vector<NullifierRecord> out = ReadSnapshot(snapshot_path);
  std::set<Nullifier> seen;
  for (const auto& r : out) seen.insert(r.nullifier);
  for (auto& r : ReadLog(log_path)) {
    // A crash between snapshot write and log truncation duplicates records.
    if (seen.insert(r.nullifier).second) out.push_back(std::move(r));
  }
  return out;
}

NullifierStore::NullifierStore(std::filesystem::path log_path,
                               std::filesystem::path snapshot_path,
                               size_t compact_every)
    : log_path_(std::move(log_path)),
      snapshot_path_(std::move(snapshot_path)),
      compact_every_(compact_every) {
  records_ = ReadNullifierRecords(log_path_, snapshot_path_);
  for (const auto& r : records_) set_.insert(r.nullifier);
}

bool NullifierStore::Contains(const Nullifier& n) const {
  std::lock_guard lock(mu_);
  return set_.count(n) != 0;
}

bool NullifierStore::TryInsert(const NullifierRecord& record) {
  std::lock_guard lock(mu_);
  if (set_.count(record.nullifier) != 0) return false;
  Bytes encoded;
  record.AppendTo(encoded);
  AppendFileSync(log_path_, encoded);
  set_.insert(record.nullifier);
  records_.push_back(record);
  if (compact_every_ > 0 && ++appended_since_compact_ >= compact_every_) {
    CompactLocked();
  }
  return true;
}

size_t NullifierStore::size() const {
  std::lock_guard lock(mu_);
  return set_.size();
}

std::vector<NullifierRecord> NullifierStore::Records() const {
  std::lock_guard lock(mu_);
  return records_;
}

std::vector<Digest> NullifierStore::Nullifiers() const {
  std::lock_guard lock(mu_);
  std::vector<Digest> out;
  for (const auto& n : set_) out.push_back(n.value);
  return out;
}

void NullifierStore::Compact() {
  std::lock_guard lock(mu_);
  CompactLocked();
}

void NullifierStore::CompactLocked() {
  std::vector<NullifierRecord> sorted = records_;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.nullifier < b.nullifier; });
  Bytes out = {kSnapshotVersion};
  AppendU64BE(out, sorted.size());
  for (const auto& r : sorted) r.AppendTo(out);
  WriteFileAtomic(snapshot_path_, out);
  WriteFileAtomic(log_path_, Bytes{});
  appended_since_compact_ = 0;
}

}  // namespace anonkey::pvs
