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

#ifndef ANONKEY_CORE_HASH_H_
#define ANONKEY_CORE_HASH_H_

#include <string>
#include <string_view>

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/field.h"

namespace anonkey {

Digest Sha256(ByteSpan data);
Bytes HmacSha256(ByteSpan key, ByteSpan data);

// Global choice of H. Tree, commitments, nullifiers and the circuit must all
// use the same profile.
enum class HashProfile : uint8_t {
  kSha256 = 1,
  kAlgebraic = 2,
};

std::string_view HashProfileName(HashProfile p);
// Accepts "sha256" or "algebraic"; throws ConfigError otherwise.
HashProfile ParseHashProfile(std::string_view name);
// Maps the serialized profile byte back; throws ParseError on unknown values.
HashProfile HashProfileFromByte(uint8_t b);

// Both profiles produce 32-byte digests. For the algebraic profile the
// digest is the canonical big-endian encoding of a scalar field element.
class Hasher {
 public:
  explicit Hasher(HashProfile profile) : profile_(profile) {}

  HashProfile profile() const { return profile_; }

  Digest Hash(ByteSpan data) const;
  // Two-to-one compression for tree nodes. Under the algebraic profile both
  // inputs must be canonical field encodings (ParseError otherwise).
  Digest HashNode(const Digest& left, const Digest& right) const;
  // Value of an unoccupied leaf slot: H of the single byte 0x00.
  Digest EmptyLeaf() const;

 private:
  HashProfile profile_;
};

// Digest <-> field element for the algebraic profile.
Digest DigestFromFr(const Fr& x);
// Throws ParseError if the digest is not a canonical field encoding.
Fr FrFromDigest(const Digest& d);

}  // namespace anonkey

#endif  // ANONKEY_CORE_HASH_H_
