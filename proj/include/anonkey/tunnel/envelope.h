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

#ifndef ANONKEY_TUNNEL_ENVELOPE_H_
#define ANONKEY_TUNNEL_ENVELOPE_H_

#include <cstdint>

#include "anonkey/core/bytes.h"
#include "anonkey/zkp/relation.h"

namespace anonkey::tunnel {

inline constexpr uint8_t kEnvelopeVersion = 1;

// Key request: version || TLV(1 statement, 2 proof, 3 t (u32), 4 pk). Also
// the on-disk proof bundle format, so a bundle can be redeemed as is.
struct KeyRequest {
  zkp::Statement statement;
  Bytes proof;
  uint32_t t = 0;
  Bytes pk;

  Bytes Serialize() const;
  // Throws ParseError.
  static KeyRequest Parse(ByteSpan data);
};

}  // namespace anonkey::tunnel

#endif  // ANONKEY_TUNNEL_ENVELOPE_H_
