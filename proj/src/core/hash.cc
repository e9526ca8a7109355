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

#include "anonkey/core/hash.h"

#include <algorithm>
#include <string>

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include "anonkey/core/errors.h"
#include "anonkey/core/poseidon.h"

namespace anonkey {

Digest Sha256(ByteSpan data) {
  Digest d;
  SHA256(data.data(), data.size(), d.bytes.data());
  return d;
}

Bytes HmacSha256(ByteSpan key, ByteSpan data) {
  Bytes out(32);
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
           data.data(), data.size(), out.data(), &len) == nullptr) {
    throw CryptoError("HMAC-SHA256 failed");
  }
  out.resize(len);
  return out;
}

std::string_view HashProfileName(HashProfile p) {
  switch (p) {
    case HashProfile::kSha256:
      return "sha256";
    case HashProfile::kAlgebraic:
      return "algebraic";
  }
  return "unknown";
}

HashProfile ParseHashProfile(std::string_view name) {
  if (name == "sha256") return HashProfile::kSha256;
  if (name == "algebraic") return HashProfile::kAlgebraic;
  throw ConfigError("unknown hash_profile '" + std::string(name) + "'");
}

HashProfile HashProfileFromByte(uint8_t b) {
  if (b == static_cast<uint8_t>(HashProfile::kSha256)) {
    return HashProfile::kSha256;
  }
  if (b == static_cast<uint8_t>(HashProfile::kAlgebraic)) {
    return HashProfile::kAlgebraic;
  }
  throw ParseError("unknown hash profile byte " + std::to_string(b));
}

Digest DigestFromFr(const Fr& x) {
  Digest d;
  d.bytes = x.ToBytesBE();
  return d;
}

Fr FrFromDigest(const Digest& d) {
  auto x = Fr::FromBytesBE(d.bytes);
  if (!x) throw ParseError("digest is not a canonical field element");
  return *x;
}

Digest Hasher::Hash(ByteSpan data) const {
  if (profile_ == HashProfile::kSha256) return Sha256(data);
  return DigestFromFr(poseidon::HashBytes(data));
}

Digest Hasher::HashNode(const Digest& left, const Digest& right) const {
  if (profile_ == HashProfile::kSha256) {
    uint8_t buf[2 * Digest::kSize];
    std::copy(left.bytes.begin(), left.bytes.end(), buf);
    std::copy(right.bytes.begin(), right.bytes.end(), buf + Digest::kSize);
    return Sha256(buf);
  }
  return DigestFromFr(
      poseidon::HashNode(FrFromDigest(left), FrFromDigest(right)));
}

Digest Hasher::EmptyLeaf() const {
  const uint8_t zero = 0;
  return Hash(ByteSpan(&zero, 1));
}

}  // namespace anonkey
