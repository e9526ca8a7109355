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

#ifndef ANONKEY_TUNNEL_APDU_H_
#define ANONKEY_TUNNEL_APDU_H_

#include <cstdint>
#include <optional>
#include <string>

#include "anonkey/core/bytes.h"

// Short-form ISO 7816-4 command and response units as used on the
// reader <-> card link.
namespace anonkey::tunnel {

inline constexpr uint8_t kCla = 0x80;
inline constexpr uint8_t kClaIso = 0x00;  // SELECT only

enum Ins : uint8_t {
  kInsSelect = 0xA4,
  kInsGetLength = 0x10,
  kInsGetChunk = 0x12,
  kInsPutLength = 0x20,
  kInsPutChunk = 0x22,
  kInsEnd = 0x30,
};

// Largest data field in one frame.
inline constexpr size_t kMaxApduData = 255;
// Payload bytes per chunk; leaves room for header and status bytes.
inline constexpr size_t kChunkSize = 250;

enum StatusWord : uint16_t {
  kSwOk = 0x9000,
  kSwWrongLength = 0x6700,
  kSwNotFound = 0x6A82,
  kSwConditionsNotSatisfied = 0x6985,
  kSwCommandNotAllowed = 0x6986,
  kSwWrongP1P2 = 0x6B00,
  kSwInsNotSupported = 0x6D00,
  kSwClaNotSupported = 0x6E00,
};

std::string StatusName(uint16_t sw);

struct ApduCommand {
  uint8_t cla = kCla;
  uint8_t ins = 0;
  uint8_t p1 = 0;
  uint8_t p2 = 0;
  Bytes data;
  // Expected response length; 0 encodes 256 in short form.
  std::optional<uint8_t> le;

  uint16_t p1p2() const { return static_cast<uint16_t>((p1 << 8) | p2); }

  // Throws PreconditionError if data exceeds kMaxApduData.
  Bytes Encode() const;
  // nullopt for frames that are not a well-formed short APDU (cases 1-4).
  static std::optional<ApduCommand> Decode(ByteSpan frame);
  friend bool operator==(const ApduCommand&, const ApduCommand&) = default;
};

struct ApduResponse {
  Bytes data;
  uint16_t sw = kSwOk;

  bool ok() const { return sw == kSwOk; }
  Bytes Encode() const;
  // nullopt for frames shorter than the two status bytes.
  static std::optional<ApduResponse> Decode(ByteSpan frame);
  friend bool operator==(const ApduResponse&, const ApduResponse&) = default;
};

// Number of chunks needed for `length` payload bytes.
inline size_t ChunkCount(size_t length, size_t chunk_size = kChunkSize) {
  return (length + chunk_size - 1) / chunk_size;
}

}  // namespace anonkey::tunnel

#endif  // ANONKEY_TUNNEL_APDU_H_
