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

#ifndef ANONKEY_TUNNEL_SESSION_H_
#define ANONKEY_TUNNEL_SESSION_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "anonkey/core/bytes.h"
#include "anonkey/tunnel/apdu.h"
#include "anonkey/tunnel/stream.h"

// The reader (validation server) drives every exchange; the card (user
// device) only answers. One session:
//   SELECT aid, GET_LENGTH, GET_CHUNK 0..n-1     card -> reader message
//   PUT_LENGTH, PUT_CHUNK 0..m-1                 reader -> card message
//   END                                          card returns to unselected
namespace anonkey::tunnel {

// Default application identifier.
inline const Bytes& DefaultAid() {
  static const Bytes aid = {0xF0, 0x41, 0x4E, 0x4F, 0x4E, 0x4B, 0x45, 0x59};
  return aid;
}

// Tunnel-level message: kind byte || payload.
enum class MessageKind : uint8_t {
  // Proof and statement without a delivery request. Not produced by the
  // client; servers answer it with a malformed error.
  kProofUpload = 1,
  // Key request envelope (statement, proof, t, pk).
  kKeyRequest = 2,
  kKeyDelivery = 3,
  // u16 status word || reason code text.
  kError = 4,
  kEnd = 5,
};

struct TunnelMessage {
  MessageKind kind;
  Bytes payload;

  Bytes Encode() const;
  // Throws ParseError.
  static TunnelMessage Decode(ByteSpan data);

  static TunnelMessage Error(uint16_t sw, const std::string& reason);
  // For kError messages: the reason code text.
  std::string ErrorReason() const;
  uint16_t ErrorStatus() const;
};

// Largest message either side accepts.
inline constexpr size_t kMaxMessageBytes = 1 << 20;

// Card-side state machine. Not thread-safe; one instance per stream.
class CardApplet {
 public:
  explicit CardApplet(Bytes aid = DefaultAid(),
                      size_t chunk_size = kChunkSize);

  // Message served to GET_LENGTH / GET_CHUNK during the next session.
  void SetOutgoing(Bytes message);
  ApduResponse Process(ByteSpan command_frame);

  bool selected() const { return state_ != State::kIdle; }
  // Set when the last session ended with END.
  bool ended() const { return ended_; }
  // Message pushed by the reader, once complete.
  std::optional<Bytes> TakeIncoming();

 private:
  enum class State { kIdle, kSelected };
  ApduResponse Handle(const ApduCommand& cmd);
  void Reset();

  Bytes aid_;
  size_t chunk_size_;
  State state_ = State::kIdle;
  bool ended_ = false;
  Bytes outgoing_;
  // Highest chunk index served so far plus one.
  size_t next_get_ = 0;
  std::optional<size_t> incoming_length_;
  Bytes incoming_;
  size_t next_put_ = 0;
  std::optional<Bytes> completed_;
};

// Serves one session on the card side: answers commands until END, then
// returns the message the reader pushed (nullopt if none). Throws
// TransportError if the stream drops first.
std::optional<Bytes> RunCardSession(FrameStream& stream, CardApplet& applet);

// Raised by the reader when the card answers with a non-success status.
class StatusError : public Error {
 public:
  StatusError(uint16_t sw, const std::string& what)
      : Error(what + ": " + StatusName(sw)), sw_(sw) {}
  uint16_t sw() const { return sw_; }

 private:
  uint16_t sw_;
};

class Reader {
 public:
  explicit Reader(FrameStream& stream, size_t chunk_size = kChunkSize)
      : stream_(stream), chunk_size_(chunk_size) {}

  // One command / response exchange. Throws TransportError.
  ApduResponse Transmit(const ApduCommand& cmd);
  ApduResponse TransmitRaw(ByteSpan frame);

  ApduResponse Select(ByteSpan aid);
  // GET_LENGTH then GET_CHUNK until the message is complete.
  Bytes Fetch();
  // PUT_LENGTH then PUT_CHUNK for every chunk.
  void Push(ByteSpan message);
  void End();

 private:
  FrameStream& stream_;
  size_t chunk_size_;
};

struct SessionTimings {
  std::chrono::nanoseconds select{0};
  std::chrono::nanoseconds upload{0};
  std::chrono::nanoseconds handle{0};
  std::chrono::nanoseconds delivery{0};
  size_t upload_bytes = 0;
  size_t delivery_bytes = 0;
};

// Reader side of one full session. `handler` maps the uploaded message to
// the reply message. Throws StatusError for a card refusing SELECT and
// TransportError for drops; if the drop happens after `handler` ran,
// `handled` is set before throwing.
SessionTimings RunReaderSession(
    FrameStream& stream, ByteSpan aid,
    const std::function<Bytes(const Bytes&)>& handler,
    bool* handled = nullptr);

}  // namespace anonkey::tunnel

#endif  // ANONKEY_TUNNEL_SESSION_H_
