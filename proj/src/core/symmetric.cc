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

#include "anonkey/core/symmetric.h"

#include <openssl/evp.h>
#include <openssl/kdf.h>
#include <openssl/rand.h>

#include <memory>

#include "anonkey/core/errors.h"

namespace anonkey {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

const EVP_CIPHER* CipherFor(AeadCipher c) {
  return c == AeadCipher::kChaCha20Poly1305 ? EVP_chacha20_poly1305()
                                            : EVP_aes_256_gcm();
}

void CheckSizes(ByteSpan key, ByteSpan nonce) {
  if (key.size() != kAeadKeyBytes || nonce.size() != kAeadNonceBytes) {
    throw PreconditionError("bad AEAD key or nonce size");
  }
}

}  // namespace

Bytes AeadSeal(AeadCipher cipher, ByteSpan key, ByteSpan nonce, ByteSpan aad,
               ByteSpan plaintext) {
  CheckSizes(key, nonce);
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  Bytes out(plaintext.size() + kAeadTagBytes);
  if (!ctx ||
      EVP_EncryptInit_ex(ctx.get(), CipherFor(cipher), nullptr, key.data(),
                         nonce.data()) != 1 ||
      (!aad.empty() && EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                         static_cast<int>(aad.size())) != 1) ||
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1 ||
      EVP_EncryptFinal_ex(ctx.get(), out.data() + len, &len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, kAeadTagBytes,
                          out.data() + plaintext.size()) != 1) {
    throw CryptoError("AEAD seal failed");
  }
  return out;
}

Bytes AeadOpen(AeadCipher cipher, ByteSpan key, ByteSpan nonce, ByteSpan aad,
               ByteSpan sealed) {
  CheckSizes(key, nonce);
  if (sealed.size() < kAeadTagBytes) throw DecryptionError("ciphertext short");
  const size_t n = sealed.size() - kAeadTagBytes;
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  int len = 0;
  Bytes out(n);
  Bytes tag(sealed.begin() + n, sealed.end());
  if (!ctx ||
      EVP_DecryptInit_ex(ctx.get(), CipherFor(cipher), nullptr, key.data(),
                         nonce.data()) != 1 ||
      (!aad.empty() && EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(),
                                         static_cast<int>(aad.size())) != 1) ||
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(),
                        static_cast<int>(n)) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, kAeadTagBytes,
                          tag.data()) != 1) {
    throw CryptoError("AEAD open setup failed");
  }
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &len) != 1) {
    SecureZero(out);
    throw DecryptionError("authentication failed");
  }
  return out;
}

Bytes HkdfSha256(ByteSpan ikm, ByteSpan salt, ByteSpan info, size_t out_len) {
  std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(
      EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr), EVP_PKEY_CTX_free);
  Bytes out(out_len);
  size_t len = out_len;
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(),
                                  static_cast<int>(salt.size())) != 1 ||
      EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(),
                                 static_cast<int>(ikm.size())) != 1 ||
      EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), info.data(),
                                  static_cast<int>(info.size())) != 1 ||
      EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1 || len != out_len) {
    throw CryptoError("HKDF failed");
  }
  return out;
}

Bytes Scrypt(ByteSpan passphrase, ByteSpan salt, const ScryptParams& params,
             size_t out_len) {
  Bytes out(out_len);
  if (EVP_PBE_scrypt(reinterpret_cast<const char*>(passphrase.data()),
                     passphrase.size(), salt.data(), salt.size(), params.n,
                     params.r, params.p, 256ull << 20, out.data(),
                     out.size()) != 1) {
    throw CryptoError("scrypt failed");
  }
  return out;
}

Bytes RandomBytes(size_t n) {
  Bytes out(n);
  if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
    throw EntropyError("RAND_bytes failed");
  }
  return out;
}

}  // namespace anonkey
