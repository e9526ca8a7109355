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

#include "anonkey/tunnel/session.h"

#include <algorithm>

#include "anonkey/core/errors.h"

namespace anonkey::tunnel {
namespace {

using Clock = std::chrono::steady_clock;

ApduResponse Status(uint16_t sw) { return ApduResponse{{}, sw}; }

}  // namespace

Bytes TunnelMessage::Encode() const {
  Bytes out = {static_cast<uint8_t>(kind)};
  Append(out, payload);
  return out;
}

TunnelMessage TunnelMessage::Decode(ByteSpan data) {
  if (data.empty()) throw ParseError("empty tunnel message");
  if (data[0] < static_cast<uint8_t>(MessageKind::kProofUpload) ||
      data[0] > static_cast<uint8_t>(MessageKind::kEnd)) {
    throw ParseError("unknown tunnel message kind");
  }
  TunnelMessage m{static_cast<MessageKind>(data[0]),
                  Bytes(data.begin() + 1, data.end())};
  if (m.kind == MessageKind::kError && m.payload.size() < 2) {
    throw ParseError("truncated error message");
  }
  return m;
}

TunnelMessage TunnelMessage::Error(uint16_t sw, const std::string& reason) {
  TunnelMessage m{MessageKind::kError, {}};
  AppendU16BE(m.payload, sw);
  m.payload.insert(m.payload.end(), reason.begin(), reason.end());
  return m;
}

std::string TunnelMessage::ErrorReason() const {
  if (kind != MessageKind::kError || payload.size() < 2) return "";
  return std::string(payload.begin() + 2, payload.end());
}

uint16_t TunnelMessage::ErrorStatus() const {
  if (kind != MessageKind::kError || payload.size() < 2) return 0;
  return static_cast<uint16_t>((payload[0] << 8) | payload[1]);
}

CardApplet::CardApplet(Bytes aid, size_t chunk_size)
    : aid_(std::move(aid)), chunk_size_(chunk_size) {
  if (chunk_size_ == 0 || chunk_size_ > kMaxApduData) {
    throw PreconditionError("chunk size must be in [1, 255]");
  }
}

void CardApplet::SetOutgoing(Bytes message) {
  if (message.size() > kMaxMessageBytes) {
    throw PreconditionError("message too large for the tunnel");
  }
  outgoing_ = std::move(message);
  next_get_ = 0;
}

std::optional<Bytes> CardApplet::TakeIncoming() {
  auto out = std::move(completed_);
  completed_.reset();
  return out;
}

void CardApplet::Reset() {
  next_get_ = 0;
  incoming_length_.reset();
  incoming_.clear();
  next_put_ = 0;
}

ApduResponse CardApplet::Process(ByteSpan command_frame) {
  ended_ = false;
  auto cmd = ApduCommand::Decode(command_frame);
  if (!cmd) return Status(kSwWrongLength);
  return Handle(*cmd);
}

ApduResponse CardApplet::Handle(const ApduCommand& cmd) {
  if (cmd.ins == kInsSelect && cmd.cla == kClaIso) {
    if (cmd.p1 != 0x04 || cmd.p2 != 0x00) return Status(kSwWrongP1P2);
    if (cmd.data != aid_) {
      state_ = State::kIdle;
      Reset();
      return Status(kSwNotFound);
    }
    state_ = State::kSelected;
    Reset();
    completed_.reset();
    return Status(kSwOk);
  }
  if (cmd.cla != kCla) return Status(kSwClaNotSupported);
  switch (cmd.ins) {
    case kInsGetLength:
    case kInsGetChunk:
    case kInsPutLength:
    case kInsPutChunk:
    case kInsEnd:
      break;
    default:
      return Status(kSwInsNotSupported);
  }
  if (state_ != State::kSelected) return Status(kSwConditionsNotSatisfied);

  switch (cmd.ins) {
    case kInsGetLength: {
      if (!cmd.data.empty()) return Status(kSwWrongLength);
      ApduResponse r;
      AppendU32BE(r.data, static_cast<uint32_t>(outgoing_.size()));
      return r;
    }
    case kInsGetChunk: {
      if (!cmd.data.empty()) return Status(kSwWrongLength);
      const size_t index = cmd.p1p2();
      // Re-reading an earlier chunk is allowed; skipping ahead aborts.
      if (index >= ChunkCount(outgoing_.size(), chunk_size_) ||
          index > next_get_) {
        next_get_ = 0;
        return Status(kSwWrongP1P2);
      }
      const size_t off = index * chunk_size_;
      const size_t n = std::min(chunk_size_, outgoing_.size() - off);
      next_get_ = std::max(next_get_, index + 1);
      return ApduResponse{Bytes(outgoing_.begin() + off,
                                outgoing_.begin() + off + n),
                          kSwOk};
    }
    case kInsPutLength: {
      if (cmd.data.size() != 4) return Status(kSwWrongLength);
      const uint32_t len = LoadU32BE(cmd.data.data());
      if (len > kMaxMessageBytes) return Status(kSwWrongLength);
      incoming_length_ = len;
      incoming_.clear();
      next_put_ = 0;
      completed_.reset();
      if (len == 0) completed_ = Bytes{};
      return Status(kSwOk);
    }
    case kInsPutChunk: {
      if (!incoming_length_) return Status(kSwCommandNotAllowed);
      const size_t index = cmd.p1p2();
      const size_t total = *incoming_length_;
      if (next_put_ > 0 && index + 1 == next_put_) {
        // Idempotent re-send of the last chunk.
        const size_t off = index * chunk_size_;
        if (std::equal(cmd.data.begin(), cmd.data.end(),
                       incoming_.begin() + off) &&
            cmd.data.size() == incoming_.size() - off) {
          return Status(kSwOk);
        }
      }
      if (index != next_put_ || index >= ChunkCount(total, chunk_size_)) {
        Reset();
        completed_.reset();
        return Status(kSwWrongP1P2);
      }
      const size_t expect = std::min(chunk_size_, total - incoming_.size());
      if (cmd.data.size() != expect) return Status(kSwWrongLength);
      Append(incoming_, cmd.data);
      ++next_put_;
      if (incoming_.size() == total) completed_ = incoming_;
      return Status(kSwOk);
    }
    case kInsEnd: {
      Reset();
      outgoing_.clear();
      state_ = State::kIdle;
      ended_ = true;
      return Status(kSwOk);
    }
  }
  return Status(kSwInsNotSupported);
}

std::optional<Bytes> RunCardSession(FrameStream& stream, CardApplet& applet) {
  for (;;) {
    auto frame = stream.Receive();
    if (!frame) throw TransportError("reader closed the link before END");
    stream.Send(applet.Process(*frame).Encode());
    if (applet.ended()) return applet.TakeIncoming();
  }
}

ApduResponse Reader::TransmitRaw(ByteSpan frame) {
  stream_.Send(frame);
  auto reply = stream_.Receive();
  if (!reply) throw TransportError("card closed the link");
  auto r = ApduResponse::Decode(*reply);
  if (!r) throw TransportError("malformed response frame");
  return *r;
}

ApduResponse Reader::Transmit(const ApduCommand& cmd) {
  return TransmitRaw(cmd.Encode());
}

ApduResponse Reader::Select(ByteSpan aid) {
  ApduCommand cmd;
  cmd.cla = kClaIso;
  cmd.ins = kInsSelect;
  cmd.p1 = 0x04;
  cmd.data.assign(aid.begin(), aid.end());
  cmd.le = 0;
  return Transmit(cmd);
}

Bytes Reader::Fetch() {
  ApduCommand len_cmd;
  len_cmd.ins = kInsGetLength;
  len_cmd.le = 4;
  ApduResponse r = Transmit(len_cmd);
  if (!r.ok()) throw StatusError(r.sw, "GET_LENGTH refused");
  if (r.data.size() != 4) throw TransportError("bad GET_LENGTH reply");
  const uint32_t total = LoadU32BE(r.data.data());
  if (total > kMaxMessageBytes) throw TransportError("message too large");
  Bytes out;
  out.reserve(total);
  const size_t chunks = ChunkCount(total, chunk_size_);
  for (size_t i = 0; i < chunks; ++i) {
    ApduCommand cmd;
    cmd.ins = kInsGetChunk;
    cmd.p1 = static_cast<uint8_t>(i >> 8);
    cmd.p2 = static_cast<uint8_t>(i);
    const size_t expect = std::min(chunk_size_, total - out.size());
    cmd.le = static_cast<uint8_t>(expect);
    ApduResponse c = Transmit(cmd);
    if (!c.ok()) throw StatusError(c.sw, "GET_CHUNK refused");
    if (c.data.size() != expect) throw TransportError("short chunk");
    Append(out, c.data);
  }
  return out;
}

void Reader::Push(ByteSpan message) {
  if (message.size() > kMaxMessageBytes) {
    throw PreconditionError("message too large for the tunnel");
  }
  ApduCommand len_cmd;
  len_cmd.ins = kInsPutLength;
  AppendU32BE(len_cmd.data, static_cast<uint32_t>(message.size()));
  ApduResponse r = Transmit(len_cmd);
  if (!r.ok()) throw StatusError(r.sw, "PUT_LENGTH refused");
  const size_t chunks = ChunkCount(message.size(), chunk_size_);
  for (size_t i = 0; i < chunks; ++i) {
    const size_t off = i * chunk_size_;
    const size_t n = std::min(chunk_size_, message.size() - off);
    ApduCommand cmd;
    cmd.ins = kInsPutChunk;
    cmd.p1 = static_cast<uint8_t>(i >> 8);
    cmd.p2 = static_cast<uint8_t>(i);
    cmd.data.assign(message.begin() + off, message.begin() + off + n);
    ApduResponse c = Transmit(cmd);
    if (!c.ok()) throw StatusError(c.sw, "PUT_CHUNK refused");
  }
}

void Reader::End() {
  ApduCommand cmd;
  cmd.ins = kInsEnd;
  ApduResponse r = Transmit(cmd);
  if (!r.ok()) throw StatusError(r.sw, "END refused");
}

SessionTimings RunReaderSession(
    FrameStream& stream, ByteSpan aid,
    const std::function<Bytes(const Bytes&)>& handler, bool* handled) {
  if (handled) *handled = false;
  SessionTimings t;
  Reader reader(stream);
  auto t0 = Clock::now();
  ApduResponse sel = reader.Select(aid);
  if (!sel.ok()) throw StatusError(sel.sw, "SELECT refused");
  auto t1 = Clock::now();
  const Bytes upload = reader.Fetch();
  auto t2 = Clock::now();
  const Bytes reply = handler(upload);
  if (handled) *handled = true;
  auto t3 = Clock::now();
  reader.Push(reply);
  reader.End();
  auto t4 = Clock::now();
  t.select = t1 - t0;
  t.upload = t2 - t1;
  t.handle = t3 - t2;
  t.delivery = t4 - t3;
  t.upload_bytes = upload.size();
  t.delivery_bytes = reply.size();
  return t;
}

}  // namespace anonkey::tunnel
