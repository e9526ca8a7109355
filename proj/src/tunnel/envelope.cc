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

#include "anonkey/tunnel/envelope.h"

#include "anonkey/core/tlv.h"

namespace anonkey::tunnel {
namespace {

constexpr uint8_t kTagStatement = 1;
constexpr uint8_t kTagProof = 2;
constexpr uint8_t kTagT = 3;
constexpr uint8_t kTagPk = 4;

}  // namespace

Bytes KeyRequest::Serialize() const {
  return TlvWriter(kEnvelopeVersion)
      .Add(kTagStatement, statement.Serialize())
      .Add(kTagProof, proof)
      .AddU32(kTagT, t)
      .Add(kTagPk, pk)
      .Finish();
}

KeyRequest KeyRequest::Parse(ByteSpan data) {
  TlvRecord rec = TlvRecord::Parse(data, kEnvelopeVersion);
  if (rec.size() != 4) throw ParseError("unexpected key request fields");
  KeyRequest req;
  req.statement = zkp::Statement::Parse(rec.Get(kTagStatement));
  req.proof = rec.Get(kTagProof);
  req.t = rec.GetU32(kTagT);
  req.pk = rec.Get(kTagPk);
  return req;
}

}  // namespace anonkey::tunnel
