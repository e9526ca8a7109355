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

#ifndef ANONKEY_CORE_TLV_H_
#define ANONKEY_CORE_TLV_H_

#include <cstdint>
#include <map>
#include <optional>

#include "anonkey/core/bytes.h"

namespace anonkey {

// Tagged binary layout shared by every on-disk and wire record:
//
//   version:u8 || (tag:u8 || length:u32be || value)*
//
// Tags must be unique within a record. Readers reject unknown versions,
// duplicate tags, and truncated fields.
class TlvWriter {
 public:
  explicit TlvWriter(uint8_t version) { out_.push_back(version); }

  TlvWriter& Add(uint8_t tag, ByteSpan value);
  TlvWriter& AddU32(uint8_t tag, uint32_t value);
  TlvWriter& AddU64(uint8_t tag, uint64_t value);

  Bytes Finish() { return std::move(out_); }

 private:
  Bytes out_;
};

class TlvRecord {
 public:
  // Throws ParseError on malformed input or a version mismatch.
  static TlvRecord Parse(ByteSpan data, uint8_t expected_version);

  bool Has(uint8_t tag) const { return fields_.count(tag) != 0; }
  size_t size() const { return fields_.size(); }
  // Throws ParseError if absent.
  const Bytes& Get(uint8_t tag) const;
  std::optional<Bytes> Find(uint8_t tag) const;
  uint32_t GetU32(uint8_t tag) const;
  uint64_t GetU64(uint8_t tag) const;
  // Throws ParseError if the field is present with a size other than `n`.
  const Bytes& GetFixed(uint8_t tag, size_t n) const;

 private:
  std::map<uint8_t, Bytes> fields_;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_TLV_H_
