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

#include "anonkey/core/certificate.h"

#include <openssl/evp.h>

#include <memory>

#include "anonkey/core/encoding.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/tlv.h"

namespace anonkey {
namespace {

constexpr uint8_t kCertVersion = 1;
constexpr uint8_t kTagSubjectId = 1;
constexpr uint8_t kTagSubjectKey = 2;
constexpr uint8_t kTagIssuerSig = 3;

constexpr uint8_t kKeyPairVersion = 1;
constexpr uint8_t kTagVerifyKey = 1;
constexpr uint8_t kTagSigningKey = 2;

struct PkeyDeleter {
  void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;
struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using MdCtx = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

Pkey PrivateKey(const SecretBytes& sk) {
  if (sk.size() != kSigningKeyBytes) {
    throw PreconditionError("bad signing key length");
  }
  Pkey k(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, sk.data(),
                                      sk.size()));
  if (!k) throw CryptoError("invalid signing key");
  return k;
}

}  // namespace

Bytes SigningKeyPair::Serialize() const {
  return TlvWriter(kKeyPairVersion)
      .Add(kTagVerifyKey, verify_key)
      .Add(kTagSigningKey, signing_key.span())
      .Finish();
}

SigningKeyPair SigningKeyPair::Parse(ByteSpan data) {
  TlvRecord rec = TlvRecord::Parse(data, kKeyPairVersion);
  SigningKeyPair kp;
  kp.verify_key = rec.GetFixed(kTagVerifyKey, kVerifyKeyBytes);
  kp.signing_key = SecretBytes(rec.GetFixed(kTagSigningKey, kSigningKeyBytes));
  return kp;
}

SigningKeyPair GenerateSigningKey(EntropySource& entropy) {
  SigningKeyPair kp;
  kp.signing_key = entropy.Draw(kSigningKeyBytes);
  Pkey k = PrivateKey(kp.signing_key);
  kp.verify_key.resize(kVerifyKeyBytes);
  size_t len = kVerifyKeyBytes;
  if (EVP_PKEY_get_raw_public_key(k.get(), kp.verify_key.data(), &len) != 1) {
    throw CryptoError("cannot export verify key");
  }
  return kp;
}

Bytes Sign(ByteSpan message, const SecretBytes& signing_key) {
  Pkey k = PrivateKey(signing_key);
  MdCtx ctx(EVP_MD_CTX_new());
  Bytes sig(kSignatureBytes);
  size_t len = sig.size();
  if (!ctx ||
      EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) != 1 ||
      EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(),
                     message.size()) != 1) {
    throw CryptoError("Ed25519 sign failed");
  }
  return sig;
}

bool VerifySignature(ByteSpan verify_key, ByteSpan message,
                     ByteSpan signature) {
  if (verify_key.size() != kVerifyKeyBytes ||
      signature.size() != kSignatureBytes) {
    return false;
  }
  Pkey k(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                     verify_key.data(), verify_key.size()));
  if (!k) return false;
  MdCtx ctx(EVP_MD_CTX_new());
  if (!ctx ||
      EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, k.get()) !=
          1) {
    return false;
  }
  return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                          message.data(), message.size()) == 1;
}

Bytes Certificate::SignedPayload() const {
  Bytes out = Encode(AsBytes(subject_id));
  Append(out, Encode(subject_verify_key));
  return out;
}

Bytes Certificate::Serialize() const {
  return TlvWriter(kCertVersion)
      .Add(kTagSubjectId, AsBytes(subject_id))
      .Add(kTagSubjectKey, subject_verify_key)
      .Add(kTagIssuerSig, issuer_signature)
      .Finish();
}

Certificate Certificate::Parse(ByteSpan data) {
  try {
    TlvRecord rec = TlvRecord::Parse(data, kCertVersion);
    Certificate cert;
    const Bytes& id = rec.Get(kTagSubjectId);
    if (id.empty()) throw ParseError("empty subject id");
    cert.subject_id.assign(id.begin(), id.end());
    cert.subject_verify_key = rec.GetFixed(kTagSubjectKey, kVerifyKeyBytes);
    cert.issuer_signature = rec.GetFixed(kTagIssuerSig, kSignatureBytes);
    if (rec.size() != 3) throw ParseError("unexpected certificate fields");
    return cert;
  } catch (const CertificateParseError&) {
    throw;
  } catch (const ParseError& e) {
    throw CertificateParseError(std::string("malformed certificate: ") +
                                e.what());
  }
}

bool VerifyCertificate(const Certificate& cert, ByteSpan ca_verify_key) {
  return VerifySignature(ca_verify_key, cert.SignedPayload(),
                         cert.issuer_signature);
}

bool VerifySign(const Certificate& cert, ByteSpan ca_verify_key,
                ByteSpan message, ByteSpan signature) {
  return VerifyCertificate(cert, ca_verify_key) &&
         VerifySignature(cert.subject_verify_key, message, signature);
}

TestCa TestCa::Generate(EntropySource& entropy) {
  return TestCa(GenerateSigningKey(entropy));
}

Certificate TestCa::Issue(const std::string& subject_id,
                          ByteSpan subject_verify_key) const {
  if (subject_id.empty() || subject_verify_key.size() != kVerifyKeyBytes) {
    throw PreconditionError("bad certificate subject");
  }
  Certificate cert;
  cert.subject_id = subject_id;
  cert.subject_verify_key.assign(subject_verify_key.begin(),
                                 subject_verify_key.end());
  cert.issuer_signature = Sign(cert.SignedPayload(), keys_.signing_key);
  return cert;
}

}  // namespace anonkey
