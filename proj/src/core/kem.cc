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

#include "anonkey/core/kem.h"

#include <openssl/evp.h>
#include <openssl/rsa.h>
#include <openssl/x509.h>

#include <memory>
#include <string>

#include "anonkey/core/errors.h"
#include "anonkey/core/symmetric.h"

namespace anonkey {
namespace {

constexpr uint8_t kContainerVersion = 1;
constexpr std::string_view kDhInfo = "anonkey/dhkem/v1";
constexpr size_t kDhMaxChunk = 4096;
constexpr int kRsaBits = 3072;
// 384 - 2 * 32 - 2 for OAEP with SHA-256.
constexpr size_t kRsaMaxChunk = 318;

enum KeyAlg : uint8_t {
  kAlgX25519 = 1,
  kAlgX448 = 2,
  kAlgRsa3072 = 3,
};

struct PkeyDeleter {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
struct PkeyCtxDeleter {
  void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
};
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;

int NidFor(uint8_t alg) {
  return alg == kAlgX25519 ? EVP_PKEY_X25519 : EVP_PKEY_X448;
}

size_t RawLen(uint8_t alg) { return alg == kAlgX25519 ? 32 : 56; }

uint8_t AlgOf(ByteSpan key) {
  if (key.empty()) throw ParseError("empty KEM key");
  const uint8_t alg = key[0];
  if (alg != kAlgX25519 && alg != kAlgX448 && alg != kAlgRsa3072) {
    throw ParseError("unknown KEM key algorithm " + std::to_string(alg));
  }
  return alg;
}

Pkey DhPublic(uint8_t alg, ByteSpan raw) {
  if (raw.size() != RawLen(alg)) throw ParseError("bad DH public key length");
  Pkey k(EVP_PKEY_new_raw_public_key(NidFor(alg), nullptr, raw.data(),
                                     raw.size()));
  if (!k) throw ParseError("invalid DH public key");
  return k;
}

Pkey DhPrivate(uint8_t alg, ByteSpan raw) {
  if (raw.size() != RawLen(alg)) throw ParseError("bad DH secret key length");
  Pkey k(EVP_PKEY_new_raw_private_key(NidFor(alg), nullptr, raw.data(),
                                      raw.size()));
  if (!k) throw ParseError("invalid DH secret key");
  return k;
}

Bytes RawPublic(EVP_PKEY* k, uint8_t alg) {
  Bytes out(RawLen(alg));
  size_t len = out.size();
  if (EVP_PKEY_get_raw_public_key(k, out.data(), &len) != 1 ||
      len != out.size()) {
    throw CryptoError("cannot export DH public key");
  }
  return out;
}

Bytes DhDerive(EVP_PKEY* priv, EVP_PKEY* peer) {
  PkeyCtx ctx(EVP_PKEY_CTX_new(priv, nullptr));
  size_t len = 0;
  if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 ||
      EVP_PKEY_derive_set_peer(ctx.get(), peer) != 1 ||
      EVP_PKEY_derive(ctx.get(), nullptr, &len) != 1) {
    throw CryptoError("DH derive setup failed");
  }
  Bytes out(len);
  if (EVP_PKEY_derive(ctx.get(), out.data(), &len) != 1) {
    throw DecryptionError("DH derive failed");
  }
  out.resize(len);
  return out;
}

Pkey RsaPublic(ByteSpan der) {
  const uint8_t* p = der.data();
  Pkey k(d2i_PUBKEY(nullptr, &p, static_cast<long>(der.size())));
  if (!k || p != der.data() + der.size() ||
      EVP_PKEY_get_base_id(k.get()) != EVP_PKEY_RSA ||
      EVP_PKEY_get_bits(k.get()) != kRsaBits) {
    throw ParseError("invalid RSA public key");
  }
  return k;
}

Pkey RsaPrivate(ByteSpan der) {
  const uint8_t* p = der.data();
  Pkey k(d2i_AutoPrivateKey(nullptr, &p, static_cast<long>(der.size())));
  if (!k || EVP_PKEY_get_base_id(k.get()) != EVP_PKEY_RSA) {
    throw ParseError("invalid RSA secret key");
  }
  return k;
}

Bytes RsaPublicDer(EVP_PKEY* k) {
  const int len = i2d_PUBKEY(k, nullptr);
  if (len <= 0) throw CryptoError("cannot encode RSA public key");
  Bytes out(static_cast<size_t>(len));
  uint8_t* p = out.data();
  i2d_PUBKEY(k, &p);
  return out;
}

Bytes ChunkAad(uint16_t seq, uint16_t count, uint32_t total) {
  Bytes aad;
  AppendU16BE(aad, seq);
  AppendU16BE(aad, count);
  AppendU32BE(aad, total);
  return aad;
}

Bytes DhSealChunk(uint8_t alg, ByteSpan pk_raw, ByteSpan aad,
                  ByteSpan chunk) {
  Pkey peer = DhPublic(alg, pk_raw);
  PkeyCtx kctx(EVP_PKEY_CTX_new_id(NidFor(alg), nullptr));
  EVP_PKEY* eph_raw = nullptr;
  if (!kctx || EVP_PKEY_keygen_init(kctx.get()) != 1 ||
      EVP_PKEY_keygen(kctx.get(), &eph_raw) != 1) {
    throw CryptoError("ephemeral keygen failed");
  }
  Pkey eph(eph_raw);
  Bytes eph_pub = RawPublic(eph.get(), alg);
  SecretBytes shared(DhDerive(eph.get(), peer.get()));
  Bytes salt = eph_pub;
  Append(salt, pk_raw);
  Bytes info(kDhInfo.begin(), kDhInfo.end());
  Append(info, aad);
  SecretBytes okm(HkdfSha256(shared.span(), salt, info,
                             kAeadKeyBytes + kAeadNonceBytes));
  Bytes out = eph_pub;
  Append(out, AeadSeal(AeadCipher::kChaCha20Poly1305,
                       okm.span().first(kAeadKeyBytes),
                       okm.span().subspan(kAeadKeyBytes), aad, chunk));
  return out;
}

Bytes DhOpenChunk(uint8_t alg, ByteSpan sk_raw, ByteSpan aad, ByteSpan ct) {
  const size_t n = RawLen(alg);
  if (ct.size() < n + kAeadTagBytes) throw DecryptionError("chunk too short");
  Pkey priv = DhPrivate(alg, sk_raw);
  Bytes pk_raw = RawPublic(priv.get(), alg);
  Pkey eph;
  try {
    eph = DhPublic(alg, ct.first(n));
  } catch (const ParseError&) {
    throw DecryptionError("bad ephemeral key");
  }
  SecretBytes shared(DhDerive(priv.get(), eph.get()));
  Bytes salt(ct.begin(), ct.begin() + n);
  Append(salt, pk_raw);
  Bytes info(kDhInfo.begin(), kDhInfo.end());
  Append(info, aad);
  SecretBytes okm(HkdfSha256(shared.span(), salt, info,
                             kAeadKeyBytes + kAeadNonceBytes));
  return AeadOpen(AeadCipher::kChaCha20Poly1305,
                  okm.span().first(kAeadKeyBytes),
                  okm.span().subspan(kAeadKeyBytes), aad, ct.subspan(n));
}

Bytes RsaSealChunk(EVP_PKEY* pk, ByteSpan aad, ByteSpan chunk) {
  PkeyCtx ctx(EVP_PKEY_CTX_new(pk, nullptr));
  if (!ctx || EVP_PKEY_encrypt_init(ctx.get()) != 1 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) != 1 ||
      EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set_rsa_mgf1_md(ctx.get(), EVP_sha256()) != 1) {
    throw CryptoError("RSA-OAEP setup failed");
  }
  // The label is owned by the context after this call.
  auto* label = static_cast<unsigned char*>(OPENSSL_memdup(aad.data(),
                                                           aad.size()));
  if (EVP_PKEY_CTX_set0_rsa_oaep_label(ctx.get(), label,
                                       static_cast<int>(aad.size())) != 1) {
    OPENSSL_free(label);
    throw CryptoError("RSA-OAEP label failed");
  }
  size_t len = 0;
  if (EVP_PKEY_encrypt(ctx.get(), nullptr, &len, chunk.data(),
                       chunk.size()) != 1) {
    throw CryptoError("RSA-OAEP size query failed");
  }
  Bytes out(len);
  if (EVP_PKEY_encrypt(ctx.get(), out.data(), &len, chunk.data(),
                       chunk.size()) != 1) {
    throw CryptoError("RSA-OAEP encrypt failed");
  }
  out.resize(len);
  return out;
}

Bytes RsaOpenChunk(EVP_PKEY* sk, ByteSpan aad, ByteSpan ct) {
  PkeyCtx ctx(EVP_PKEY_CTX_new(sk, nullptr));
  if (!ctx || EVP_PKEY_decrypt_init(ctx.get()) != 1 ||
      EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_PKCS1_OAEP_PADDING) != 1 ||
      EVP_PKEY_CTX_set_rsa_oaep_md(ctx.get(), EVP_sha256()) != 1 ||
      EVP_PKEY_CTX_set_rsa_mgf1_md(ctx.get(), EVP_sha256()) != 1) {
    throw CryptoError("RSA-OAEP setup failed");
  }
  auto* label = static_cast<unsigned char*>(OPENSSL_memdup(aad.data(),
                                                           aad.size()));
  if (EVP_PKEY_CTX_set0_rsa_oaep_label(ctx.get(), label,
                                       static_cast<int>(aad.size())) != 1) {
    OPENSSL_free(label);
    throw CryptoError("RSA-OAEP label failed");
  }
  size_t len = 0;
  if (EVP_PKEY_decrypt(ctx.get(), nullptr, &len, ct.data(), ct.size()) != 1) {
    throw DecryptionError("RSA-OAEP decrypt failed");
  }
  Bytes out(len);
  if (EVP_PKEY_decrypt(ctx.get(), out.data(), &len, ct.data(), ct.size()) !=
      1) {
    throw DecryptionError("RSA-OAEP decrypt failed");
  }
  out.resize(len);
  return out;
}

}  // namespace

std::string_view KemProfileName(KemProfile p) {
  switch (p) {
    case KemProfile::kDhkem:
      return "dhkem";
    case KemProfile::kRsaOaep:
      return "rsa-oaep";
  }
  return "unknown";
}

KemProfile ParseKemProfile(std::string_view name) {
  if (name == "dhkem") return KemProfile::kDhkem;
  if (name == "rsa-oaep") return KemProfile::kRsaOaep;
  throw ConfigError("unknown kem_profile '" + std::string(name) + "'");
}

bool IsSupportedLambda(unsigned lambda) {
  return lambda == 128 || lambda == 192 || lambda == 256;
}

KemKeyPair KemKeygen(KemProfile profile, unsigned lambda,
                     EntropySource& entropy) {
  if (!IsSupportedLambda(lambda)) {
    throw PreconditionError("unsupported lambda " + std::to_string(lambda));
  }
  KemKeyPair kp;
  if (profile == KemProfile::kDhkem) {
    const uint8_t alg = lambda == 128 ? kAlgX25519 : kAlgX448;
    SecretBytes raw = entropy.Draw(RawLen(alg));
    Pkey k = DhPrivate(alg, raw.span());
    kp.pk.push_back(alg);
    Append(kp.pk, RawPublic(k.get(), alg));
    Bytes sk{alg};
    Append(sk, raw.span());
    kp.sk = SecretBytes(std::move(sk));
    return kp;
  }
  if (lambda != 128) {
    throw PreconditionError("rsa-oaep profile only supports lambda 128");
  }
  Pkey k(EVP_RSA_gen(kRsaBits));
  if (!k) throw CryptoError("RSA keygen failed");
  kp.pk.push_back(kAlgRsa3072);
  Append(kp.pk, RsaPublicDer(k.get()));
  const int len = i2d_PrivateKey(k.get(), nullptr);
  if (len <= 0) throw CryptoError("cannot encode RSA secret key");
  Bytes sk(1 + static_cast<size_t>(len));
  sk[0] = kAlgRsa3072;
  uint8_t* p = sk.data() + 1;
  i2d_PrivateKey(k.get(), &p);
  kp.sk = SecretBytes(std::move(sk));
  return kp;
}

KemProfile KemProfileOfKey(ByteSpan key) {
  return AlgOf(key) == kAlgRsa3072 ? KemProfile::kRsaOaep : KemProfile::kDhkem;
}

void KemValidatePublicKey(ByteSpan pk) {
  const uint8_t alg = AlgOf(pk);
  if (alg == kAlgRsa3072) {
    RsaPublic(pk.subspan(1));
  } else {
    DhPublic(alg, pk.subspan(1));
  }
}

bool KemKeyPairMatches(ByteSpan pk, const SecretBytes& sk) {
  try {
    const uint8_t alg = AlgOf(pk);
    if (AlgOf(sk.span()) != alg) return false;
    Bytes derived{alg};
    if (alg == kAlgRsa3072) {
      Pkey k = RsaPrivate(sk.span().subspan(1));
      Append(derived, RsaPublicDer(k.get()));
    } else {
      Pkey k = DhPrivate(alg, sk.span().subspan(1));
      Append(derived, RawPublic(k.get(), alg));
    }
    return ConstantTimeEqual(derived, pk);
  } catch (const ParseError&) {
    return false;
  }
}

size_t KemMaxChunk(KemProfile profile) {
  return profile == KemProfile::kDhkem ? kDhMaxChunk : kRsaMaxChunk;
}

EncapsulatedKey KemEncap(ByteSpan ikm, ByteSpan pk) {
  if (ikm.empty() || ikm.size() > kKemMaxTotalBytes) {
    throw PreconditionError("key material length out of range");
  }
  const uint8_t alg = AlgOf(pk);
  const KemProfile profile = KemProfileOfKey(pk);
  const size_t max_chunk = KemMaxChunk(profile);
  const size_t count = (ikm.size() + max_chunk - 1) / max_chunk;
  if (count > 0xffff) throw PreconditionError("too many chunks");
  const auto total = static_cast<uint32_t>(ikm.size());

  Pkey rsa_pk;
  if (alg == kAlgRsa3072) rsa_pk = RsaPublic(pk.subspan(1));

  EncapsulatedKey out;
  Bytes& c = out.ciphertext;
  c.push_back(kContainerVersion);
  c.push_back(static_cast<uint8_t>(profile));
  AppendU16BE(c, static_cast<uint16_t>(count));
  AppendU32BE(c, total);
  for (size_t i = 0; i < count; ++i) {
    const size_t off = i * max_chunk;
    ByteSpan chunk = ikm.subspan(off, std::min(max_chunk, ikm.size() - off));
    Bytes aad = ChunkAad(static_cast<uint16_t>(i),
                         static_cast<uint16_t>(count), total);
    Bytes sealed = alg == kAlgRsa3072
                       ? RsaSealChunk(rsa_pk.get(), aad, chunk)
                       : DhSealChunk(alg, pk.subspan(1), aad, chunk);
    AppendU16BE(c, static_cast<uint16_t>(i));
    AppendU32BE(c, static_cast<uint32_t>(sealed.size()));
    Append(c, sealed);
  }
  return out;
}

EncapsulatedKeyInfo InspectEncapsulatedKey(const EncapsulatedKey& c) {
  ByteReader r(c.ciphertext);
  if (r.U8() != kContainerVersion) {
    throw ParseError("unsupported encapsulated key version");
  }
  const uint8_t profile = r.U8();
  if (profile != static_cast<uint8_t>(KemProfile::kDhkem) &&
      profile != static_cast<uint8_t>(KemProfile::kRsaOaep)) {
    throw ParseError("unknown encapsulated key profile");
  }
  EncapsulatedKeyInfo info;
  info.profile = static_cast<KemProfile>(profile);
  info.chunk_count = r.U16BE();
  info.total_length = r.U32BE();
  return info;
}

SecretBytes KemDecap(const EncapsulatedKey& c, const SecretBytes& sk) {
  const EncapsulatedKeyInfo info = InspectEncapsulatedKey(c);
  const uint8_t alg = AlgOf(sk.span());
  if (KemProfileOfKey(sk.span()) != info.profile) {
    throw DecryptionError("secret key profile does not match ciphertext");
  }
  const size_t max_chunk = KemMaxChunk(info.profile);
  if (info.total_length == 0 || info.total_length > kKemMaxTotalBytes ||
      info.chunk_count != (info.total_length + max_chunk - 1) / max_chunk) {
    throw ParseError("inconsistent encapsulated key header");
  }
  Pkey rsa_sk;
  if (alg == kAlgRsa3072) rsa_sk = RsaPrivate(sk.span().subspan(1));

  ByteReader r(c.ciphertext);
  r.Take(8);
  Bytes out;
  out.reserve(info.total_length);
  for (uint16_t i = 0; i < info.chunk_count; ++i) {
    if (r.U16BE() != i) throw ParseError("chunk out of sequence");
    ByteSpan sealed = r.Take(r.U32BE());
    Bytes aad = ChunkAad(i, info.chunk_count, info.total_length);
    Bytes chunk;
    try {
      chunk = alg == kAlgRsa3072
                  ? RsaOpenChunk(rsa_sk.get(), aad, sealed)
                  : DhOpenChunk(alg, sk.span().subspan(1), aad, sealed);
    } catch (...) {
      SecureZero(out);
      throw;
    }
    const size_t expect =
        std::min<size_t>(max_chunk, info.total_length - out.size());
    if (chunk.size() != expect) {
      SecureZero(out);
      SecureZero(chunk);
      throw DecryptionError("chunk length mismatch");
    }
    Append(out, chunk);
    SecureZero(chunk);
  }
  r.ExpectEnd();
  return SecretBytes(std::move(out));
}

}  // namespace anonkey
