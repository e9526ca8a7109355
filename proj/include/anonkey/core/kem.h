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

#ifndef ANONKEY_CORE_KEM_H_
#define ANONKEY_CORE_KEM_H_

#include <cstdint>
#include <string_view>

#include "anonkey/core/bytes.h"
#include "anonkey/core/entropy.h"

namespace anonkey {

// `kDhkem` is an HPKE-style construction: ephemeral X25519 (lambda 128) or
// X448 (lambda 192, 256), HKDF-SHA256, ChaCha20-Poly1305. `kRsaOaep` uses
// RSA-3072 with OAEP-SHA256 and is only offered for lambda 128.
enum class KemProfile : uint8_t {
  kDhkem = 1,
  kRsaOaep = 2,
};

std::string_view KemProfileName(KemProfile p);
// Accepts "dhkem" or "rsa-oaep"; throws ConfigError otherwise.
KemProfile ParseKemProfile(std::string_view name);

bool IsSupportedLambda(unsigned lambda);

// Keys are self-describing: one algorithm byte followed by the raw key
// (X25519/X448) or DER (RSA SubjectPublicKeyInfo / PKCS#8).
struct KemKeyPair {
  Bytes pk;
  SecretBytes sk;
};

// DH private keys are drawn from `entropy`, so a seeded mock source makes
// keygen reproducible. RSA keys come from the OpenSSL DRBG.
KemKeyPair KemKeygen(KemProfile profile, unsigned lambda,
                     EntropySource& entropy);

// Profile of a public or secret key blob; throws ParseError if unknown.
KemProfile KemProfileOfKey(ByteSpan key);
// Throws ParseError if `pk` is not a well-formed public key.
void KemValidatePublicKey(ByteSpan pk);
// True when `sk` is the secret key for `pk`.
bool KemKeyPairMatches(ByteSpan pk, const SecretBytes& sk);

// Largest plaintext sealed in one encapsulation; longer key material is
// split into chunks carrying a sequence tag.
size_t KemMaxChunk(KemProfile profile);
inline constexpr size_t kKemMaxTotalBytes = 1u << 24;

struct EncapsulatedKey {
  Bytes ciphertext;
};

// Encapsulates `ikm` (1 byte .. kKemMaxTotalBytes) under `pk`. Randomized.
EncapsulatedKey KemEncap(ByteSpan ikm, ByteSpan pk);
// Throws DecryptionError when `sk` does not match or any chunk fails to
// authenticate, ParseError when the container is malformed.
SecretBytes KemDecap(const EncapsulatedKey& c, const SecretBytes& sk);

struct EncapsulatedKeyInfo {
  KemProfile profile;
  uint16_t chunk_count;
  uint32_t total_length;
};
EncapsulatedKeyInfo InspectEncapsulatedKey(const EncapsulatedKey& c);

}  // namespace anonkey

#endif  // ANONKEY_CORE_KEM_H_
