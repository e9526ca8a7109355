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

#include "anonkey/core/tlv.h"

#include <limits>
#include <string>

#include "anonkey/core/errors.h"

namespace anonkey {

TlvWriter& TlvWriter::Add(uint8_t tag, ByteSpan value) {
  if (value.size() > std::numeric_limits<uint32_t>::max()) {
    throw PreconditionError("TLV value too large");
  }
  out_.push_back(tag);
  AppendU32BE(out_, static_cast<uint32_t>(value.size()));
  Append(out_, value);
  return *this;
}

TlvWriter& TlvWriter::AddU32(uint8_t tag, uint32_t value) {
  Bytes b;
  AppendU32BE(b, value);
  return Add(tag, b);
}

TlvWriter& TlvWriter::AddU64(uint8_t tag, uint64_t value) {
  Bytes b;
  AppendU64BE(b, value);
  return Add(tag, b);
}

TlvRecord TlvRecord::Parse(ByteSpan data, uint8_t expected_version) {
  ByteReader reader(data);
  const uint8_t version = reader.U8();
  if (version != expected_version) {
    throw ParseError("unsupported record version " + std::to_string(version));
  }
  TlvRecord record;
  while (!reader.empty()) {
    const uint8_t tag = reader.U8();
    const uint32_t len = reader.U32BE();
    Bytes value = reader.TakeBytes(len);
    if (!record.fields_.emplace(tag, std::move(value)).second) {
      throw ParseError("duplicate tag " + std::to_string(tag));
    }
  }
  return record;
}

const Bytes& TlvRecord::Get(uint8_t tag) const {
  auto it = fields_.find(tag);
  if (it == fields_.end()) {
    throw ParseError("missing tag " + std::to_string(tag));
  }
  return it->second;
}

std::optional<Bytes> TlvRecord::Find(uint8_t tag) const {
  auto it = fields_.find(tag);
  if (it == fields_.end()) return std::nullopt;
  return it->second;
}

uint32_t TlvRecord::GetU32(uint8_t tag) const {
  return LoadU32BE(GetFixed(tag, 4).data());
}

uint64_t TlvRecord::GetU64(uint8_t tag) const {
  return LoadU64BE(GetFixed(tag, 8).data());
}

const Bytes& TlvRecord::GetFixed(uint8_t tag, size_t n) const {
  const Bytes& v = Get(tag);
  if (v.size() != n) {
    throw ParseError("tag " + std::to_string(tag) + " has length " +
                     std::to_string(v.size()) + ", expected " +
                     std::to_string(n));
  }
  return v;
}

}  // namespace anonkey
