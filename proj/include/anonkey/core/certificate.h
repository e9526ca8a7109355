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

#ifndef ANONKEY_CORE_CERTIFICATE_H_
#define ANONKEY_CORE_CERTIFICATE_H_

#include <string>

#include "anonkey/core/bytes.h"
#include "anonkey/core/entropy.h"

// Ed25519 signatures and a one-level test certificate authority.
namespace anonkey {

inline constexpr size_t kVerifyKeyBytes = 32;
inline constexpr size_t kSigningKeyBytes = 32;
inline constexpr size_t kSignatureBytes = 64;

struct SigningKeyPair {
  Bytes verify_key;
  SecretBytes signing_key;

  Bytes Serialize() const;
  static SigningKeyPair Parse(ByteSpan data);
};

SigningKeyPair GenerateSigningKey(EntropySource& entropy);
Bytes Sign(ByteSpan message, const SecretBytes& signing_key);
// False for any malformed key or signature.
bool VerifySignature(ByteSpan verify_key, ByteSpan message,
                     ByteSpan signature);

struct Certificate {
  std::string subject_id;
  Bytes subject_verify_key;
  Bytes issuer_signature;

  // encode(subject_id) || encode(subject_verify_key), the bytes the CA signs.
  Bytes SignedPayload() const;
  Bytes Serialize() const;
  // Throws CertificateParseError on any structural problem.
  static Certificate Parse(ByteSpan data);
};

// Validity of the issuer signature under `ca_verify_key`.
bool VerifyCertificate(const Certificate& cert, ByteSpan ca_verify_key);

// True iff the certificate is issued by the CA and `signature` verifies under
// the certificate's subject key.
bool VerifySign(const Certificate& cert, ByteSpan ca_verify_key,
                ByteSpan message, ByteSpan signature);

class TestCa {
 public:
  static TestCa Generate(EntropySource& entropy);
  explicit TestCa(SigningKeyPair keys) : keys_(std::move(keys)) {}

  const Bytes& verify_key() const { return keys_.verify_key; }
  const SigningKeyPair& keys() const { return keys_; }

  Certificate Issue(const std::string& subject_id,
                    ByteSpan subject_verify_key) const;

 private:
  SigningKeyPair keys_;
};

}  // namespace anonkey

#endif  // ANONKEY_CORE_CERTIFICATE_H_
