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

#include "anonkey/tunnel/apdu.h"

#include <cstdio>

#include "anonkey/core/errors.h"

namespace anonkey::tunnel {

std::string StatusName(uint16_t sw) {
  switch (sw) {
    case kSwOk:
      return "ok";
    case kSwWrongLength:
      return "wrong length";
    case kSwNotFound:
      return "applet not found";
    case kSwConditionsNotSatisfied:
      return "conditions not satisfied";
    case kSwCommandNotAllowed:
      return "command not allowed";
    case kSwWrongP1P2:
      return "wrong parameters";
    case kSwInsNotSupported:
      return "instruction not supported";
    case kSwClaNotSupported:
      return "class not supported";
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sw %04X", sw);
  return buf;
}

Bytes ApduCommand::Encode() const {
  if (data.size() > kMaxApduData) {
    throw PreconditionError("APDU data exceeds 255 bytes");
  }
  Bytes out = {cla, ins, p1, p2};
  if (!data.empty()) {
    out.push_back(static_cast<uint8_t>(data.size()));
    Append(out, data);
  }
  if (le) out.push_back(*le);
  return out;
}

std::optional<ApduCommand> ApduCommand::Decode(ByteSpan frame) {
  if (frame.size() < 4) return std::nullopt;
  ApduCommand cmd;
  cmd.cla = frame[0];
  cmd.ins = frame[1];
  cmd.p1 = frame[2];
  cmd.p2 = frame[3];
  if (frame.size() == 4) return cmd;
  if (frame.size() == 5) {
    cmd.le = frame[4];
    return cmd;
  }
  const size_t lc = frame[4];
  // Lc = 0 would introduce an extended-length APDU, which is not used here.
  if (lc == 0) return std::nullopt;
  if (frame.size() != 5 + lc && frame.size() != 6 + lc) return std::nullopt;
  cmd.data.assign(frame.begin() + 5, frame.begin() + 5 + lc);
  if (frame.size() == 6 + lc) cmd.le = frame.back();
  return cmd;
}

Bytes ApduResponse::Encode() const {
  Bytes out = data;
  out.push_back(static_cast<uint8_t>(sw >> 8));
  out.push_back(static_cast<uint8_t>(sw));
  return out;
}

std::optional<ApduResponse> ApduResponse::Decode(ByteSpan frame) {
  if (frame.size() < 2) return std::nullopt;
  ApduResponse r;
  r.data.assign(frame.begin(), frame.end() - 2);
  r.sw = static_cast<uint16_t>((frame[frame.size() - 2] << 8) | frame.back());
  return r;
}

}  // namespace anonkey::tunnel
