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

#ifndef ANONKEY_CORE_BYTES_H_
#define ANONKEY_CORE_BYTES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anonkey {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;

std::string ToHex(ByteSpan data);
// Accepts upper or lower case; throws ParseError on odd length or bad digits.
Bytes FromHex(std::string_view hex);

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

void AppendU16BE(Bytes& out, uint16_t v);
void AppendU32BE(Bytes& out, uint32_t v);
void AppendU64BE(Bytes& out, uint64_t v);
void Append(Bytes& out, ByteSpan data);

uint16_t LoadU16BE(const uint8_t* p);
uint32_t LoadU32BE(const uint8_t* p);
uint64_t LoadU64BE(const uint8_t* p);

// Overwrites memory in a way the optimizer may not elide.
void SecureZero(std::span<uint8_t> data);

// Constant-time equality for equal-length inputs; false on length mismatch.
bool ConstantTimeEqual(ByteSpan a, ByteSpan b);

// Bounds-checked sequential reader. Every accessor throws ParseError when the
// input is exhausted.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  uint8_t U8();
  uint16_t U16BE();
  uint32_t U32BE();
  uint64_t U64BE();
  ByteSpan Take(size_t n);
  Bytes TakeBytes(size_t n);

  size_t remaining() const { return data_.size() - pos_; }
  bool empty() const { return remaining() == 0; }
  size_t position() const { return pos_; }
  // Throws ParseError if any bytes remain.
  void ExpectEnd() const;

 private:
  ByteSpan data_;
  size_t pos_ = 0;
};

// Owning byte buffer that is wiped on destruction. Used for secrets.
class SecretBytes {
 public:
  SecretBytes() = default;
  explicit SecretBytes(Bytes b) : bytes_(std::move(b)) {}
  explicit SecretBytes(ByteSpan b) : bytes_(b.begin(), b.end()) {}
  SecretBytes(const SecretBytes&) = default;
  SecretBytes& operator=(const SecretBytes& other);
  SecretBytes(SecretBytes&& other) noexcept;
  SecretBytes& operator=(SecretBytes&& other) noexcept;
  ~SecretBytes();

  ByteSpan span() const { return bytes_; }
  std::span<uint8_t> mutable_span() { return bytes_; }
  const uint8_t* data() const { return bytes_.data(); }
  size_t size() const { return bytes_.size(); }
  bool empty() const { return bytes_.empty(); }
  Bytes Copy() const { return bytes_; }

  friend bool operator==(const SecretBytes& a, const SecretBytes& b) {
    return a.bytes_ == b.bytes_;
  }

 private:
  void Wipe();
  Bytes bytes_;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_BYTES_H_
