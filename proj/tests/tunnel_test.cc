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

#include <chrono>
#include <random>
#include <thread>

#include "anonkey/tunnel/apdu.h"
#include "anonkey/tunnel/envelope.h"
#include "anonkey/tunnel/session.h"
#include "anonkey/tunnel/stream.h"
#include "gtest/gtest.h"

namespace anonkey::tunnel {
namespace {

using namespace std::chrono_literals;

Bytes RandomPayload(std::mt19937_64& rng, size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<uint8_t>(rng());
  return b;
}

ApduCommand Cmd(uint8_t ins, uint16_t p1p2 = 0, Bytes data = {}) {
  ApduCommand c;
  c.ins = ins;
  c.p1 = static_cast<uint8_t>(p1p2 >> 8);
  c.p2 = static_cast<uint8_t>(p1p2);
  c.data = std::move(data);
  return c;
}

ApduCommand SelectCmd(const Bytes& aid) {
  ApduCommand c;
  c.cla = kClaIso;
  c.ins = kInsSelect;
  c.p1 = 0x04;
  c.data = aid;
  return c;
}

uint16_t Sw(CardApplet& card, const ApduCommand& c) {
  return card.Process(c.Encode()).sw;
}

TEST(ApduTest, EncodeDecodeAllCases) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    ApduCommand c;
    c.cla = static_cast<uint8_t>(rng());
    c.ins = static_cast<uint8_t>(rng());
    c.p1 = static_cast<uint8_t>(rng());
    c.p2 = static_cast<uint8_t>(rng());
    c.data = RandomPayload(rng, rng() % 2 ? 0 : 1 + rng() % 255);
    if (rng() % 2) c.le = static_cast<uint8_t>(rng());
    const Bytes frame = c.Encode();
    EXPECT_LE(frame.size(), 4u + 1 + 255 + 1);
    auto d = ApduCommand::Decode(frame);
    ASSERT_TRUE(d.has_value());
    EXPECT_EQ(*d, c);
  }
  ApduCommand big;
  big.data.resize(256);
  EXPECT_THROW(big.Encode(), PreconditionError);
}

TEST(ApduTest, MalformedFramesRejected) {
  EXPECT_FALSE(ApduCommand::Decode(Bytes{}).has_value());
  EXPECT_FALSE(ApduCommand::Decode(Bytes{0x80, 0x10, 0}).has_value());
  // Lc says 5 bytes but only 3 follow.
  EXPECT_FALSE(ApduCommand::Decode(Bytes{0, 0xA4, 4, 0, 5, 1, 2, 3})
                   .has_value());
  // Lc = 0 with trailing bytes (extended form) is not supported.
  EXPECT_FALSE(ApduCommand::Decode(Bytes{0, 0xA4, 4, 0, 0, 1, 2}).has_value());
  EXPECT_FALSE(ApduResponse::Decode(Bytes{0x90}).has_value());
  auto r = ApduResponse::Decode(Bytes{1, 2, 0x90, 0x00});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->data, (Bytes{1, 2}));
  EXPECT_TRUE(r->ok());
}

TEST(CardAppletTest, SelectAndWrongAid) {
  CardApplet card;
  EXPECT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
  EXPECT_TRUE(card.selected());
  EXPECT_EQ(Sw(card, SelectCmd(Bytes{0xA0, 0, 0, 0, 1})), kSwNotFound);
  EXPECT_FALSE(card.selected());
  // Link stays usable: a correct SELECT still works.
  EXPECT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
}

TEST(CardAppletTest, TruncatedFramesGiveWrongLength) {
  CardApplet card;
  const Bytes frame = SelectCmd(DefaultAid()).Encode();
  // Every strict prefix that is not itself a valid shorter APDU.
  for (size_t n = 0; n < frame.size(); ++n) {
    Bytes prefix(frame.begin(), frame.begin() + n);
    const auto resp = card.Process(prefix);
    if (!ApduCommand::Decode(prefix)) {
      EXPECT_EQ(resp.sw, kSwWrongLength) << "prefix " << n;
    } else {
      EXPECT_NE(resp.sw, kSwOk) << "prefix " << n;
    }
  }
}

TEST(CardAppletTest, StateAndVocabulary) {
  CardApplet card;
  EXPECT_EQ(Sw(card, Cmd(kInsGetLength)), kSwConditionsNotSatisfied);
  ApduCommand bad_cla = Cmd(kInsGetLength);
  bad_cla.cla = 0x12;
  EXPECT_EQ(Sw(card, bad_cla), kSwClaNotSupported);
  EXPECT_EQ(Sw(card, Cmd(0x77)), kSwInsNotSupported);
  ASSERT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 0, {1})), kSwCommandNotAllowed);
  EXPECT_EQ(Sw(card, Cmd(kInsPutLength, 0, {1, 2})), kSwWrongLength);
  ApduCommand sel = SelectCmd(DefaultAid());
  sel.p1 = 0;
  EXPECT_EQ(Sw(card, sel), kSwWrongP1P2);
}

TEST(CardAppletTest, OutOfOrderAbortsAndRepeatIsIdempotent) {
  CardApplet card;
  std::mt19937_64 rng(2);
  const Bytes msg = RandomPayload(rng, 1000);
  card.SetOutgoing(msg);
  ASSERT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
  auto c0 = card.Process(Cmd(kInsGetChunk, 0).Encode());
  ASSERT_TRUE(c0.ok());
  auto c0_again = card.Process(Cmd(kInsGetChunk, 0).Encode());
  EXPECT_EQ(c0_again, c0);
  EXPECT_EQ(Sw(card, Cmd(kInsGetChunk, 2)), kSwWrongP1P2);
  // Aborted: chunk 1 is now out of order too; restart from 0 works.
  EXPECT_EQ(Sw(card, Cmd(kInsGetChunk, 1)), kSwWrongP1P2);
  EXPECT_EQ(Sw(card, Cmd(kInsGetChunk, 0)), kSwOk);
  EXPECT_EQ(Sw(card, Cmd(kInsGetChunk, 4)), kSwWrongP1P2);

  // Push side.
  ASSERT_EQ(Sw(card, Cmd(kInsPutLength, 0, {0, 0, 1, 0})), kSwOk);  // 256
  Bytes first(250, 7), second(6, 8);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 0, first)), kSwOk);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 0, first)), kSwOk);  // re-send
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 1, Bytes(5, 8))), kSwWrongLength);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 1, second)), kSwOk);
  auto in = card.TakeIncoming();
  ASSERT_TRUE(in.has_value());
  EXPECT_EQ(in->size(), 256u);
  ASSERT_EQ(Sw(card, Cmd(kInsPutLength, 0, {0, 0, 1, 0})), kSwOk);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 1, second)), kSwWrongP1P2);
  EXPECT_EQ(Sw(card, Cmd(kInsPutChunk, 0, first)), kSwCommandNotAllowed);
}

TEST(CardAppletTest, EndReturnsToUnselected) {
  CardApplet card;
  card.SetOutgoing(Bytes(10, 1));
  ASSERT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
  EXPECT_EQ(Sw(card, Cmd(kInsEnd)), kSwOk);
  EXPECT_TRUE(card.ended());
  EXPECT_FALSE(card.selected());
  EXPECT_EQ(Sw(card, Cmd(kInsGetLength)), kSwConditionsNotSatisfied);
  ASSERT_EQ(Sw(card, SelectCmd(DefaultAid())), kSwOk);
  auto len = card.Process(Cmd(kInsGetLength).Encode());
  EXPECT_EQ(len.data, (Bytes{0, 0, 0, 0}));  // outgoing cleared by END
}

struct SessionResult {
  Bytes uploaded;
  std::optional<Bytes> delivered;
  std::vector<Transcript::Entry> transcript;
};

// Runs one full session over an in-process pipe.
SessionResult RoundTrip(const Bytes& up, const Bytes& down) {
  auto [reader_end, card_end] = MakePipe();
  auto transcript = std::make_shared<Transcript>();
  RecordingStream reader_stream(std::move(reader_end), transcript);
  SessionResult result;
  std::thread card_thread([&, card = std::move(card_end)] {
    CardApplet applet;
    applet.SetOutgoing(up);
    result.delivered = RunCardSession(*card, applet);
  });
  RunReaderSession(reader_stream, DefaultAid(), [&](const Bytes& got) {
    result.uploaded = got;
    return down;
  });
  card_thread.join();
  result.transcript = transcript->entries();
  return result;
}

size_t CountIns(const std::vector<Transcript::Entry>& t, uint8_t ins) {
  size_t n = 0;
  for (const auto& e : t) {
    if (e.direction != Transcript::Direction::kCommand) continue;
    auto c = ApduCommand::Decode(e.frame);
    if (c && c->ins == ins) ++n;
  }
  return n;
}

TEST(SessionTest, ThousandBytesIsFourChunks) {
  std::mt19937_64 rng(3);
  const Bytes up = RandomPayload(rng, 1000);
  auto r = RoundTrip(up, Bytes{});
  EXPECT_EQ(r.uploaded, up);
  EXPECT_EQ(CountIns(r.transcript, kInsGetChunk), 4u);
  for (const auto& e : r.transcript) {
    if (e.direction == Transcript::Direction::kResponse &&
        e.frame.size() > 6) {
      EXPECT_EQ(e.frame.size(), 252u);  // 250 data + status
    }
  }
  ASSERT_TRUE(r.delivered.has_value());
  EXPECT_TRUE(r.delivered->empty());
}

TEST(SessionTest, EmptyPayload) {
  auto r = RoundTrip(Bytes{}, Bytes{});
  EXPECT_TRUE(r.uploaded.empty());
  EXPECT_EQ(CountIns(r.transcript, kInsGetChunk), 0u);
  EXPECT_EQ(CountIns(r.transcript, kInsPutChunk), 0u);
  EXPECT_FALSE(CheckReaderInitiates(r.transcript).has_value());
}

TEST(SessionTest, RandomPayloadsRoundTripBothWays) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t up_len = 1 + rng() % 4096;
    const size_t down_len = 1 + rng() % 4096;
    const Bytes up = RandomPayload(rng, up_len);
    const Bytes down = RandomPayload(rng, down_len);
    auto r = RoundTrip(up, down);
    ASSERT_EQ(r.uploaded, up) << "trial " << trial;
    ASSERT_TRUE(r.delivered.has_value());
    ASSERT_EQ(*r.delivered, down) << "trial " << trial;
    EXPECT_EQ(CountIns(r.transcript, kInsGetChunk), ChunkCount(up_len));
    EXPECT_EQ(CountIns(r.transcript, kInsPutChunk), ChunkCount(down_len));
    EXPECT_EQ(CountIns(r.transcript, kInsEnd), 1u);
    auto violation = CheckReaderInitiates(r.transcript);
    EXPECT_FALSE(violation.has_value()) << *violation;
  }
}

TEST(SessionTest, TranscriptCheckerFlagsUnsolicitedFrames) {
  std::vector<Transcript::Entry> t = {
      {Transcript::Direction::kCommand, SelectCmd(DefaultAid()).Encode()},
      {Transcript::Direction::kResponse, {0x90, 0x00}},
      {Transcript::Direction::kResponse, {0x90, 0x00}},
  };
  EXPECT_TRUE(CheckReaderInitiates(t).has_value());
  t.erase(t.begin(), t.begin() + 1);
  EXPECT_TRUE(CheckReaderInitiates(t).has_value());
}

TEST(SessionTest, SequentialSessionsOnOneStream) {
  auto [reader_end, card_end] = MakePipe();
  std::thread card_thread([card = std::move(card_end)] {
    CardApplet applet;
    for (uint8_t i = 0; i < 3; ++i) {
      applet.SetOutgoing(Bytes(300, i));
      auto in = RunCardSession(*card, applet);
      ASSERT_TRUE(in.has_value());
      EXPECT_EQ(*in, Bytes(10, static_cast<uint8_t>(i + 100)));
    }
  });
  for (uint8_t i = 0; i < 3; ++i) {
    RunReaderSession(*reader_end, DefaultAid(), [i](const Bytes& got) {
      EXPECT_EQ(got, Bytes(300, i));
      return Bytes(10, static_cast<uint8_t>(i + 100));
    });
  }
  card_thread.join();
}

TEST(SessionTest, WrongAidRefusedInBand) {
  auto [reader_end, card_end] = MakePipe();
  std::thread card_thread([card = std::move(card_end)] {
    CardApplet applet(Bytes{1, 2, 3});
    EXPECT_THROW(RunCardSession(*card, applet), TransportError);
  });
  bool handled = true;
  try {
    RunReaderSession(*reader_end, DefaultAid(),
                     [](const Bytes&) { return Bytes{}; }, &handled);
    ADD_FAILURE() << "session should fail";
  } catch (const StatusError& e) {
    EXPECT_EQ(e.sw(), kSwNotFound);
  }
  EXPECT_FALSE(handled);
  reader_end->Close();
  card_thread.join();
}

TEST(SessionTest, DropDuringUploadNeverRunsHandler) {
  std::mt19937_64 rng(5);
  const Bytes up = RandomPayload(rng, 1000);  // four chunks
  auto [reader_end, card_end] = MakePipe();
  // SELECT, GET_LENGTH, chunk 0, chunk 1, then the link drops.
  FaultInjectingStream faulty(std::move(reader_end), 4);
  std::thread card_thread([&, card = std::move(card_end)] {
    CardApplet applet;
    applet.SetOutgoing(up);
    EXPECT_THROW(RunCardSession(*card, applet), TransportError);
  });
  bool handled = true;
  bool called = false;
  EXPECT_THROW(RunReaderSession(faulty, DefaultAid(),
                                [&](const Bytes&) {
                                  called = true;
                                  return Bytes{};
                                },
                                &handled),
               TransportError);
  EXPECT_FALSE(called);
  EXPECT_FALSE(handled);
  card_thread.join();
}

TEST(SessionTest, DropDuringDeliveryReportsHandled) {
  auto [reader_end, card_end] = MakePipe();
  // SELECT, GET_LENGTH, one chunk, PUT_LENGTH, then drop.
  FaultInjectingStream faulty(std::move(reader_end), 4);
  std::thread card_thread([card = std::move(card_end)] {
    CardApplet applet;
    applet.SetOutgoing(Bytes(100, 1));
    EXPECT_THROW(RunCardSession(*card, applet), TransportError);
  });
  bool handled = false;
  EXPECT_THROW(RunReaderSession(faulty, DefaultAid(),
                                [](const Bytes&) { return Bytes(600, 2); },
                                &handled),
               TransportError);
  EXPECT_TRUE(handled);
  card_thread.join();
}

TEST(StreamTest, TcpLoopbackSession) {
  TcpListener listener("127.0.0.1", 0);
  ASSERT_NE(listener.port(), 0);
  std::mt19937_64 rng(6);
  const Bytes up = RandomPayload(rng, 3000);
  const Bytes down = RandomPayload(rng, 777);
  std::thread server([&] {
    auto conn = listener.Accept();
    ASSERT_NE(conn, nullptr);
    RunReaderSession(*conn, DefaultAid(), [&](const Bytes& got) {
      EXPECT_EQ(got, up);
      return down;
    });
  });
  auto client = ConnectTcp("127.0.0.1", listener.port());
  client->SetReceiveTimeout(10s);
  CardApplet applet;
  applet.SetOutgoing(up);
  auto got = RunCardSession(*client, applet);
  server.join();
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(*got, down);
  EXPECT_THROW(ConnectTcp("127.0.0.1", 1), TransportError);
}

TEST(StreamTest, PipeTimeoutAndClose) {
  auto [a, b] = MakePipe();
  a->SetReceiveTimeout(20ms);
  EXPECT_THROW(a->Receive(), TransportError);
  b->Send(Bytes{1});
  b->Close();
  EXPECT_EQ(*a->Receive(), Bytes{1});
  EXPECT_FALSE(a->Receive().has_value());
  EXPECT_THROW(a->Send(Bytes{2}), TransportError);
}

TEST(StreamTest, RateLimiterSlowsTransfer) {
  auto [a, b] = MakePipe();
  RateLimitedStream slow(std::move(a), 10000.0);  // 10 kB/s
  const auto t0 = std::chrono::steady_clock::now();
  slow.Send(Bytes(500, 0));
  b->Send(Bytes(500, 0));
  slow.Receive();
  const auto elapsed = std::chrono::steady_clock::now() - t0;
  EXPECT_GE(elapsed, 90ms);
}

TEST(StreamTest, ParseHostPort) {
  EXPECT_EQ(ParseHostPort("127.0.0.1:8080"),
            (std::pair<std::string, uint16_t>{"127.0.0.1", 8080}));
  EXPECT_THROW(ParseHostPort("nohost"), ConfigError);
  EXPECT_THROW(ParseHostPort("h:99999"), ConfigError);
  EXPECT_THROW(ParseHostPort("h:12x"), ConfigError);
}

TEST(MessageTest, ErrorAndEnvelope) {
  auto e = TunnelMessage::Error(kSwConditionsNotSatisfied, "nullifier-spent");
  auto d = TunnelMessage::Decode(e.Encode());
  EXPECT_EQ(d.kind, MessageKind::kError);
  EXPECT_EQ(d.ErrorStatus(), kSwConditionsNotSatisfied);
  EXPECT_EQ(d.ErrorReason(), "nullifier-spent");
  EXPECT_THROW(TunnelMessage::Decode(Bytes{}), ParseError);
  EXPECT_THROW(TunnelMessage::Decode(Bytes{9}), ParseError);
  EXPECT_THROW(TunnelMessage::Decode(Bytes{4, 1}), ParseError);

  KeyRequest req;
  req.statement.nullifier.value.bytes[0] = 1;
  req.statement.root.bytes[31] = 2;
  req.proof = Bytes(226, 3);
  req.t = 4096;
  req.pk = Bytes(57, 4);
  const Bytes wire = req.Serialize();
  KeyRequest back = KeyRequest::Parse(wire);
  EXPECT_EQ(back.statement, req.statement);
  EXPECT_EQ(back.proof, req.proof);
  EXPECT_EQ(back.t, 4096u);
  EXPECT_EQ(back.pk, req.pk);
  for (size_t cut = 0; cut < wire.size(); cut += 7) {
    EXPECT_THROW(KeyRequest::Parse(ByteSpan(wire).first(cut)), ParseError);
  }
}

}  // namespace
}  // namespace anonkey::tunnel
