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

#ifndef ANONKEY_CORE_NOTE_H_
#define ANONKEY_CORE_NOTE_H_

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/entropy.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/kem.h"

namespace anonkey {

// The user secret (rho, pk, sk). rho holds lambda / 8 bytes.
struct Note {
  Bytes rho;
  Bytes pk;
  SecretBytes sk;

  unsigned lambda() const { return static_cast<unsigned>(rho.size() * 8); }

  // version byte, then TLV fields rho, pk, sk.
  Bytes Serialize() const;
  // Throws ParseError on malformed input or an unsupported rho length.
  static Note Parse(ByteSpan data);
};

struct Commitment {
  Digest value;
  friend auto operator<=>(const Commitment&, const Commitment&) = default;
};

struct Nullifier {
  Digest value;
  friend auto operator<=>(const Nullifier&, const Nullifier&) = default;
};

// Fresh uniform rho and KEM key pair. Throws PreconditionError for
// unsupported lambda; entropy failures propagate as EntropyError before any
// Note is returned.
Note UserInit(unsigned lambda, KemProfile kem, EntropySource& entropy);

// encode(sk) || encode(rho), the preimage of the commitment.
Bytes CommitmentPreimage(const Note& note);
// encode(pk) || encode(rho), the preimage of the nullifier.
Bytes NullifierPreimage(const Note& note);

// C = H(encode(sk) || encode(rho)).
Commitment DeriveCommitment(const Note& note, const Hasher& hasher);
// N = H(encode(pk) || encode(rho)).
Nullifier DeriveNullifier(const Note& note, const Hasher& hasher);

}  // namespace anonkey

#endif  // ANONKEY_CORE_NOTE_H_
