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

#ifndef ANONKEY_CORE_DIGEST_H_
#define ANONKEY_CORE_DIGEST_H_

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <string>
#include <string_view>

#include "anonkey/core/bytes.h"

namespace anonkey {

// A 32-byte hash output. Both hash profiles produce digests of this size; in
// the algebraic profile the bytes are the big-endian encoding of a scalar
// field element.
struct Digest {
  static constexpr size_t kSize = 32;
  std::array<uint8_t, kSize> bytes{};

  ByteSpan span() const { return bytes; }
  std::string Hex() const { return ToHex(bytes); }

  // Throws ParseError unless `data` is exactly 32 bytes.
  static Digest FromSpan(ByteSpan data);
  static Digest FromHex(std::string_view hex);

  friend auto operator<=>(const Digest&, const Digest&) = default;
};

}  // namespace anonkey

template <>
struct std::hash<anonkey::Digest> {
  size_t operator()(const anonkey::Digest& d) const noexcept {
    size_t h;
    std::memcpy(&h, d.bytes.data(), sizeof(h));
    return h;
  }
};

#endif  // ANONKEY_CORE_DIGEST_H_
