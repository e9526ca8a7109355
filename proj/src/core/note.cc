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

#include "anonkey/core/note.h"

#include <string>

#include "anonkey/core/encoding.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/tlv.h"

namespace anonkey {
namespace {

constexpr uint8_t kNoteVersion = 1;
constexpr uint8_t kTagRho = 1;
constexpr uint8_t kTagPk = 2;
constexpr uint8_t kTagSk = 3;

}  // namespace

Bytes Note::Serialize() const {
  return TlvWriter(kNoteVersion)
      .Add(kTagRho, rho)
      .Add(kTagPk, pk)
      .Add(kTagSk, sk.span())
      .Finish();
}

Note Note::Parse(ByteSpan data) {
  TlvRecord rec = TlvRecord::Parse(data, kNoteVersion);
  Note note;
  note.rho = rec.Get(kTagRho);
  note.pk = rec.Get(kTagPk);
  note.sk = SecretBytes(rec.Get(kTagSk));
  if (!IsSupportedLambda(note.lambda())) {
    throw ParseError("unsupported rho length " +
                     std::to_string(note.rho.size()));
  }
  KemValidatePublicKey(note.pk);
  return note;
}

Note UserInit(unsigned lambda, KemProfile kem, EntropySource& entropy) {
  if (!IsSupportedLambda(lambda)) {
    throw PreconditionError("unsupported lambda " + std::to_string(lambda));
  }
  Note note;
  SecretBytes rho = entropy.Draw(lambda / 8);
  KemKeyPair kp = KemKeygen(kem, lambda, entropy);
  note.rho = rho.Copy();
  note.pk = std::move(kp.pk);
  note.sk = std::move(kp.sk);
  return note;
}

Bytes CommitmentPreimage(const Note& note) {
  return EncodePair(note.sk.span(), note.rho);
}

Bytes NullifierPreimage(const Note& note) {
  return EncodePair(note.pk, note.rho);
}

Commitment DeriveCommitment(const Note& note, const Hasher& hasher) {
  Bytes preimage = CommitmentPreimage(note);
  Commitment c{hasher.Hash(preimage)};
  SecureZero(preimage);
  return c;
}

Nullifier DeriveNullifier(const Note& note, const Hasher& hasher) {
  return Nullifier{hasher.Hash(NullifierPreimage(note))};
}

}  // namespace anonkey
