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

#ifndef ANONKEY_CORE_SYMMETRIC_H_
#define ANONKEY_CORE_SYMMETRIC_H_

#include <cstdint>

#include "anonkey/core/bytes.h"

// Thin wrappers over OpenSSL symmetric primitives.
namespace anonkey {

inline constexpr size_t kAeadKeyBytes = 32;
inline constexpr size_t kAeadNonceBytes = 12;
inline constexpr size_t kAeadTagBytes = 16;

enum class AeadCipher { kChaCha20Poly1305, kAes256Gcm };

// Returns ciphertext || tag.
Bytes AeadSeal(AeadCipher cipher, ByteSpan key, ByteSpan nonce, ByteSpan aad,
               ByteSpan plaintext);
// Throws DecryptionError on authentication failure.
Bytes AeadOpen(AeadCipher cipher, ByteSpan key, ByteSpan nonce, ByteSpan aad,
               ByteSpan sealed);

Bytes HkdfSha256(ByteSpan ikm, ByteSpan salt, ByteSpan info, size_t out_len);

struct ScryptParams {
  uint64_t n = 1u << 15;
  uint64_t r = 8;
  uint64_t p = 1;
};
Bytes Scrypt(ByteSpan passphrase, ByteSpan salt, const ScryptParams& params,
             size_t out_len);

// OS CSPRNG bytes; throws EntropyError on failure.
Bytes RandomBytes(size_t n);

}  // namespace anonkey

#endif  // ANONKEY_CORE_SYMMETRIC_H_
