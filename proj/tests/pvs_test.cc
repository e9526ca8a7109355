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

#include <atomic>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "anonkey/auth/auth_server.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"
#include "anonkey/pvs/http_service.h"
#include "anonkey/pvs/nullifier_store.h"
#include "anonkey/pvs/pvs.h"
#include "anonkey/tunnel/envelope.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.h"

namespace anonkey::pvs {
namespace {

using anonkey::testing::Enroll;
using anonkey::testing::Enrolled;
using anonkey::testing::ScopedTempDir;
using tunnel::KeyRequest;
using tunnel::MessageKind;
using tunnel::TunnelMessage;

constexpr uint64_t kPvsSeed = 4242;

NullifierRecord Record(uint8_t tag) {
  NullifierRecord r;
  r.nullifier.value = Sha256(Bytes{tag});
  r.root = Sha256(Bytes{tag, tag});
  r.proof = Bytes(tag % 7 + 1, tag);
  r.timestamp_ms = 1000 + tag;
  return r;
}

TEST(ReasonCodeTest, RoundTrip) {
  for (Reason r : {Reason::kAccepted, Reason::kRootInvalid,
                   Reason::kNullifierSpent, Reason::kProofInvalid,
                   Reason::kMalformed, Reason::kKeySizeOutOfRange,
                   Reason::kDeliveryFailed, Reason::kInternal}) {
    EXPECT_EQ(ParseReasonCode(ReasonCode(r)), r);
  }
  EXPECT_FALSE(ParseReasonCode("nope"));
  EXPECT_EQ(ReasonCode(Reason::kNullifierSpent), "nullifier-spent");
}

class NullifierStoreTest : public ::testing::Test {
 protected:
  std::filesystem::path log() const { return dir_.path() / "n.log"; }
  std::filesystem::path snap() const { return dir_.path() / "n.snap"; }
  ScopedTempDir dir_;
};

TEST_F(NullifierStoreTest, InsertIsPersistentAndUnique) {
  {
    NullifierStore s(log(), snap(), 0);
    EXPECT_TRUE(s.TryInsert(Record(1)));
    EXPECT_TRUE(s.TryInsert(Record(2)));
    NullifierRecord again = Record(3);
    again.nullifier = Record(1).nullifier;
    EXPECT_FALSE(s.TryInsert(again));
    EXPECT_EQ(s.size(), 2u);
  }
  NullifierStore s(log(), snap(), 0);
  EXPECT_TRUE(s.Contains(Record(1).nullifier));
  EXPECT_TRUE(s.Contains(Record(2).nullifier));
  EXPECT_FALSE(s.Contains(Record(3).nullifier));
  EXPECT_EQ(s.Records(), (std::vector{Record(1), Record(2)}));
}

TEST_F(NullifierStoreTest, CompactionPreservesContents) {
  {
    NullifierStore s(log(), snap(), 5);
    for (uint8_t i = 0; i < 13; ++i) ASSERT_TRUE(s.TryInsert(Record(i)));
  }
  EXPECT_TRUE(std::filesystem::exists(snap()));
  // 13 records, compacted at 5 and 10: three left in the log.
  EXPECT_EQ(ReadNullifierRecords(log(), "/nonexistent").size(), 3u);
  NullifierStore s(log(), snap(), 5);
  EXPECT_EQ(s.size(), 13u);
  for (uint8_t i = 0; i < 13; ++i) EXPECT_TRUE(s.Contains(Record(i).nullifier));
  auto ns = s.Nullifiers();
  EXPECT_TRUE(std::is_sorted(ns.begin(), ns.end()));
}

TEST_F(NullifierStoreTest, SurvivesTruncatedTailAndDuplicatedRecords) {
  {
    NullifierStore s(log(), snap(), 0);
    s.TryInsert(Record(1));
    s.TryInsert(Record(2));
    s.Compact();
    s.TryInsert(Record(3));
  }
  // Crash between snapshot write and log truncation, then a torn append.
  Bytes tail;
  Record(1).AppendTo(tail);
  Record(4).AppendTo(tail);
  tail.resize(tail.size() - 5);
  AppendFileSync(log(), tail);
  NullifierStore s(log(), snap(), 0);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_FALSE(s.Contains(Record(4).nullifier));
}

TEST_F(NullifierStoreTest, ConcurrentInsertsOfOneNullifierAdmitOne) {
  NullifierStore s(log(), snap(), 0);
  for (int round = 0; round < 20; ++round) {
    std::atomic<int> wins{0};
    std::vector<std::thread> ts;
    for (int i = 0; i < 8; ++i) {
      ts.emplace_back([&, i] {
        NullifierRecord r = Record(static_cast<uint8_t>(round));
        r.timestamp_ms = i;
        if (s.TryInsert(r)) ++wins;
      });
    }
    for (auto& t : ts) t.join();
    EXPECT_EQ(wins.load(), 1);
  }
  EXPECT_EQ(NullifierStore(log(), snap(), 0).size(), 20u);
}

// Fails on demand; otherwise forwards to an in-process registry.
class FlakyRegistry : public RegistrySource {
 public:
  FlakyRegistry(std::unique_ptr<RegistrySource> inner,
                std::shared_ptr<std::atomic<bool>> fail)
      : inner_(std::move(inner)), fail_(std::move(fail)) {}
  RegistryView Fetch() override {
    if (*fail_) throw IoError("registry unreachable");
    return inner_->Fetch();
  }

 private:
  std::unique_ptr<RegistrySource> inner_;
  std::shared_ptr<std::atomic<bool>> fail_;
};

struct User {
  Enrolled id;
  Note note;
};

class PvsTest : public ::testing::Test {
 protected:
  PvsTest() : entropy_(7), ca_(TestCa::Generate(entropy_)) {
    config_.depth = 4;
    config_.backend = zkp::BackendKind::kMock;
    config_.ca_verify_key = ca_.verify_key();
    config_.test_seed = 1;
  }

  void SetUp() override { Start(); }

  void Start() {
    server_ = auth::AuthServer::ServerSetup(as_dir_.path(), config_, true);
    prover_.emplace(zkp::Prover::Load(server_->crs().proving_key));
    pvs_entropy_ = std::make_shared<MockEntropySource>(kPvsSeed);
    fail_sync_ = std::make_shared<std::atomic<bool>>(false);
    PvsOptions opts;
    opts.max_t = 4096;
    opts.kem_profile = config_.protocol.kem_profile;
    pvs_ = std::make_unique<Pvs>(
        zkp::Verifier::Load(server_->crs().verification_key),
        std::make_unique<FlakyRegistry>(MakeInProcessRegistry(*server_),
                                        fail_sync_),
        pvs_entropy_,
        std::make_unique<NullifierStore>(pvs_dir_.path() / "n.log",
                                         pvs_dir_.path() / "n.snap", 0),
        opts);
  }

  User NewUser(const std::string& name) {
    User u{Enroll(ca_, name, entropy_),
           UserInit(config_.protocol.lambda, config_.protocol.kem_profile,
                    entropy_)};
    const Commitment c =
        DeriveCommitment(u.note, Hasher(config_.protocol.hash_profile));
    EXPECT_TRUE(server_
                    ->Register(u.id.cert.Serialize(), c,
                               Sign(c.value.bytes, u.id.keys.signing_key))
                    .accepted());
    return u;
  }

  KeyRequest Request(const User& u, uint32_t t) {
    auto [x, w] = zkp::MakeStatementAndWitness(u.note,
                                               server_->Snapshot()->tree);
    return {x, prover_->Prove(x, w), t, u.note.pk};
  }

  static Bytes Encode(const KeyRequest& r) {
    return TunnelMessage{MessageKind::kKeyRequest, r.Serialize()}.Encode();
  }

  TunnelMessage Handle(const KeyRequest& r) {
    return TunnelMessage::Decode(pvs_->HandleKeyRequest(Encode(r)));
  }

  static std::string ReasonOf(const TunnelMessage& m) {
    return m.kind == MessageKind::kError ? m.ErrorReason() : "delivered";
  }

  ScopedTempDir as_dir_;
  ScopedTempDir pvs_dir_;
  MockEntropySource entropy_;
  TestCa ca_;
  auth::ServerConfig config_;
  std::unique_ptr<auth::AuthServer> server_;
  std::optional<zkp::Prover> prover_;
  std::shared_ptr<MockEntropySource> pvs_entropy_;
  std::shared_ptr<std::atomic<bool>> fail_sync_;
  std::unique_ptr<Pvs> pvs_;
};

TEST_F(PvsTest, HonestRequestDeliversFreshEntropy) {
  User u = NewUser("alice");
  ASSERT_TRUE(pvs_->SyncRegistry());
  const KeyRequest req = Request(u, 100);
  TunnelMessage m = Handle(req);
  ASSERT_EQ(m.kind, MessageKind::kKeyDelivery) << ReasonOf(m);
  SecretBytes key = KemDecap({m.payload}, u.note.sk);
  // The PVS drew the first 100 bytes of its entropy stream.
  EXPECT_EQ(Bytes(key.span().begin(), key.span().end()),
            MockEntropySource::StreamPrefix(kPvsSeed, 100));
  EXPECT_EQ(pvs_entropy_->bytes_served(), 100u);
  auto records = pvs_->nullifiers().Records();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].nullifier, req.statement.nullifier);
  EXPECT_EQ(records[0].root, req.statement.root);
  EXPECT_EQ(records[0].proof, req.proof);
}

TEST_F(PvsTest, SecondRedemptionIsRejected) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 32);
  ASSERT_EQ(Handle(req).kind, MessageKind::kKeyDelivery);
  TunnelMessage m = Handle(req);
  EXPECT_EQ(ReasonOf(m), "nullifier-spent");
  EXPECT_EQ(m.ErrorStatus(), tunnel::kSwConditionsNotSatisfied);
  // A fresh proof for the same note carries the same nullifier.
  EXPECT_EQ(ReasonOf(Handle(Request(u, 32))), "nullifier-spent");
  EXPECT_EQ(pvs_->nullifiers().size(), 1u);
  EXPECT_EQ(pvs_entropy_->bytes_served(), 32u);
}

TEST_F(PvsTest, UnknownRootIsRejectedWithoutSpending) {
  User u = NewUser("alice");
  // Not synced since the registration: the current root is unknown here.
  const KeyRequest req = Request(u, 32);
  EXPECT_EQ(ReasonOf(Handle(req)), "root-invalid");
  EXPECT_EQ(pvs_->nullifiers().size(), 0u);
  pvs_->SyncRegistry();
  EXPECT_EQ(Handle(req).kind, MessageKind::kKeyDelivery);
}

TEST_F(PvsTest, OldRootsRemainValid) {
  User a = NewUser("alice");
  const KeyRequest stale = Request(a, 16);
  for (int i = 0; i < 3; ++i) NewUser("u" + std::to_string(i));
  pvs_->SyncRegistry();
  EXPECT_NE(stale.statement.root, server_->Root());
  EXPECT_EQ(Handle(stale).kind, MessageKind::kKeyDelivery);
}

TEST_F(PvsTest, EvictedRootIsRejected) {
  config_.old_roots_retention = 1;
  Start();
  User a = NewUser("alice");
  const KeyRequest old = Request(a, 16);
  NewUser("bob");
  NewUser("carol");
  pvs_->SyncRegistry();
  EXPECT_EQ(ReasonOf(Handle(old)), "root-invalid");
  EXPECT_EQ(Handle(Request(a, 16)).kind, MessageKind::kKeyDelivery);
}

TEST_F(PvsTest, TamperedProofsAreRejectedWithoutSpending) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 16);
  for (size_t bit = 0; bit < req.proof.size() * 8; bit += 13) {
    KeyRequest bad = req;
    bad.proof[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    EXPECT_EQ(ReasonOf(Handle(bad)), "proof-invalid") << bit;
  }
  KeyRequest wrong_n = req;
  wrong_n.statement.nullifier.value = Sha256(Bytes{1});
  EXPECT_EQ(ReasonOf(Handle(wrong_n)), "proof-invalid");
  EXPECT_EQ(pvs_->nullifiers().size(), 0u);
  EXPECT_EQ(Handle(req).kind, MessageKind::kKeyDelivery);
}

TEST_F(PvsTest, ParametersAreCheckedBeforeTheProof) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  KeyRequest req = Request(u, 0);
  EXPECT_EQ(ReasonOf(Handle(req)), "key-size-out-of-range");
  req.t = 4097;
  EXPECT_EQ(ReasonOf(Handle(req)), "key-size-out-of-range");
  req.t = 4096;
  KeyRequest bad_pk = req;
  bad_pk.pk = Bytes(10, 1);
  EXPECT_EQ(ReasonOf(Handle(bad_pk)), "malformed");
  MockEntropySource e(3);
  KeyRequest rsa = req;
  rsa.pk = KemKeygen(KemProfile::kRsaOaep, 128, e).pk;
  EXPECT_EQ(ReasonOf(Handle(rsa)), "malformed");
  EXPECT_EQ(pvs_->nullifiers().size(), 0u);
  TunnelMessage m = Handle(req);
  ASSERT_EQ(m.kind, MessageKind::kKeyDelivery);
  EXPECT_EQ(KemDecap({m.payload}, u.note.sk).size(), 4096u);
}

TEST_F(PvsTest, MalformedMessagesGetWrongLengthStatus) {
  for (const Bytes& msg :
       {Bytes{}, Bytes{0x02}, Bytes{0x02, 0, 0, 0, 9},
        TunnelMessage{MessageKind::kProofUpload, Bytes{1, 2}}.Encode()}) {
    TunnelMessage m = TunnelMessage::Decode(pvs_->HandleKeyRequest(msg));
    EXPECT_EQ(m.ErrorReason(), "malformed");
    EXPECT_EQ(m.ErrorStatus(), tunnel::kSwWrongLength);
  }
}

TEST_F(PvsTest, EntropyFailureAfterAcceptanceKeepsNullifierSpent) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 16);
  pvs_entropy_->FailNextDraw();
  EXPECT_EQ(ReasonOf(Handle(req)), "delivery-failed");
  EXPECT_TRUE(pvs_->nullifiers().Contains(req.statement.nullifier));
  EXPECT_EQ(ReasonOf(Handle(req)), "nullifier-spent");
}

TEST_F(PvsTest, FailedSyncKeepsLastViewAndFlagsStaleness) {
  User u = NewUser("alice");
  ASSERT_TRUE(pvs_->SyncRegistry());
  EXPECT_FALSE(pvs_->health().stale);
  const Digest root = pvs_->health().root;
  const KeyRequest known = Request(u, 8);
  *fail_sync_ = true;
  NewUser("bob");
  EXPECT_FALSE(pvs_->SyncRegistry());
  Health h = pvs_->health();
  EXPECT_TRUE(h.stale);
  EXPECT_EQ(h.root, root);
  // The last view keeps serving; roots it has not seen are refused.
  EXPECT_EQ(ReasonOf(Handle(Request(u, 8))), "root-invalid");
  EXPECT_EQ(Handle(known).kind, MessageKind::kKeyDelivery);
  *fail_sync_ = false;
  EXPECT_TRUE(pvs_->SyncRegistry());
  EXPECT_FALSE(pvs_->health().stale);
  EXPECT_EQ(pvs_->health().root, server_->Root());
}

TEST_F(PvsTest, DeliverKeyEnforcesRange) {
  User u = NewUser("alice");
  EXPECT_THROW(pvs_->DeliverKey(0, u.note.pk), PreconditionError);
  EXPECT_THROW(pvs_->DeliverKey(4097, u.note.pk), PreconditionError);
  EXPECT_THROW(pvs_->DeliverKey(5, Bytes{1, 2}), ParseError);
  EncapsulatedKey k = pvs_->DeliverKey(4096, u.note.pk);
  EXPECT_EQ(KemDecap(k, u.note.sk).size(), 4096u);
}

// Card side: push the request, read back the PVS answer.
TunnelMessage CardExchange(tunnel::FrameStream& s, const Bytes& request) {
  tunnel::CardApplet applet;
  applet.SetOutgoing(request);
  auto reply = tunnel::RunCardSession(s, applet);
  if (!reply) throw tunnel::TransportError("no reply");
  return TunnelMessage::Decode(*reply);
}

TEST_F(PvsTest, TunnelSessionOverPipe) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  auto [reader_end, card_end] = tunnel::MakePipe();
  auto transcript = std::make_shared<tunnel::Transcript>();
  tunnel::RecordingStream recorded(std::move(reader_end), transcript);
  std::thread reader([&] { pvs_->ServeConnection(recorded); });
  TunnelMessage m = CardExchange(*card_end, Encode(Request(u, 600)));
  reader.join();
  ASSERT_EQ(m.kind, MessageKind::kKeyDelivery);
  EXPECT_EQ(KemDecap({m.payload}, u.note.sk).size(), 600u);
  EXPECT_FALSE(tunnel::CheckReaderInitiates(transcript->entries()));
}

TEST_F(PvsTest, DropDuringDeliverySpendsNullifier) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 2000);
  auto [reader_end, card_end] = tunnel::MakePipe();
  // SELECT + PUT_LENGTH + PUT_CHUNKs go through, then the link dies.
  const size_t upload_frames =
      2 + tunnel::ChunkCount(Encode(req).size(), tunnel::kChunkSize);
  tunnel::FaultInjectingStream flaky(std::move(reader_end), upload_frames + 2);
  std::thread reader([&] { pvs_->ServeConnection(flaky); });
  EXPECT_THROW(CardExchange(*card_end, Encode(req)), std::exception);
  card_end->Close();
  reader.join();
  EXPECT_TRUE(pvs_->nullifiers().Contains(req.statement.nullifier));
}

TEST_F(PvsTest, DropDuringUploadDoesNotSpend) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 16);
  auto [reader_end, card_end] = tunnel::MakePipe();
  tunnel::FaultInjectingStream flaky(std::move(reader_end), 2);
  std::thread reader([&] { pvs_->ServeConnection(flaky); });
  EXPECT_THROW(CardExchange(*card_end, Encode(req)), std::exception);
  card_end->Close();
  reader.join();
  EXPECT_EQ(pvs_->nullifiers().size(), 0u);
}

TEST_F(PvsTest, ConcurrentDoubleSpendOverTcpDeliversOnce) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const Bytes req = Encode(Request(u, 64));
  tunnel::TcpListener listener("127.0.0.1", 0);
  std::thread server([&] { pvs_->Serve(listener); });
  std::atomic<int> delivered{0}, spent{0};
  std::vector<std::thread> clients;
  for (int i = 0; i < 6; ++i) {
    clients.emplace_back([&] {
      auto s = tunnel::ConnectTcp("127.0.0.1", listener.port());
      TunnelMessage m = CardExchange(*s, req);
      if (m.kind == MessageKind::kKeyDelivery) ++delivered;
      if (ReasonOf(m) == "nullifier-spent") ++spent;
    });
  }
  for (auto& c : clients) c.join();
  listener.Close();
  server.join();
  EXPECT_EQ(delivered.load(), 1);
  EXPECT_EQ(spent.load(), 5);
}

TEST_F(PvsTest, LogsNeverContainKeysOrCommitments) {
  std::ostringstream captured;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(captured);
  auto previous = spdlog::default_logger();
  spdlog::set_default_logger(std::make_shared<spdlog::logger>("capture", sink));
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 16);
  Handle(req);
  Handle(req);
  KeyRequest bad = req;
  bad.proof[3] ^= 1;
  Handle(bad);
  spdlog::set_default_logger(previous);
  const std::string log = captured.str();
  const Digest c =
      DeriveCommitment(u.note, Hasher(config_.protocol.hash_profile)).value;
  EXPECT_FALSE(log.empty());
  for (const std::string& secret :
       {ToHex(u.note.pk).substr(0, 16), c.Hex().substr(0, 16),
        ToHex(u.note.rho).substr(0, 16)}) {
    EXPECT_EQ(log.find(secret), std::string::npos) << secret;
  }
}

TEST_F(PvsTest, HttpHealthAndNullifiers) {
  User u = NewUser("alice");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 16);
  Handle(req);
  PvsHttpService http(*pvs_);
  const uint16_t port = http.Start("127.0.0.1", 0);
  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Get("/health");
  ASSERT_TRUE(res);
  auto j = nlohmann::json::parse(res->body);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["nullifiers"], 1);
  EXPECT_EQ(j["entropy"], "mock");
  EXPECT_EQ(j["root"], server_->Root().Hex());
  res = cli.Get("/nullifiers");
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body)["nullifiers"][0],
            req.statement.nullifier.value.Hex());
  *fail_sync_ = true;
  pvs_->SyncRegistry();
  EXPECT_EQ(nlohmann::json::parse(cli.Get("/health")->body)["status"],
            "stale");
}

TEST_F(PvsTest, BackgroundSyncPicksUpNewRoots) {
  PvsOptions opts;
  opts.sync_interval = std::chrono::milliseconds(20);
  Pvs pvs(zkp::Verifier::Load(server_->crs().verification_key),
          MakeInProcessRegistry(*server_),
          std::make_shared<MockEntropySource>(1),
          std::make_unique<NullifierStore>(pvs_dir_.path() / "b.log",
                                           pvs_dir_.path() / "b.snap"),
          opts);
  NewUser("alice");
  for (int i = 0; i < 200 && pvs.health().root != server_->Root(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  EXPECT_EQ(pvs.health().root, server_->Root());
}

TEST_F(PvsTest, OpenSharedUsesDataDirectory) {
  User u = NewUser("alice");
  auto shared = Pvs::OpenShared(auth::DataDir{as_dir_.path()},
                                std::make_shared<MockEntropySource>(2));
  EXPECT_EQ(shared->health().root, server_->Root());
  EXPECT_EQ(TunnelMessage::Decode(shared->HandleKeyRequest(Encode(Request(u, 8))))
                .kind,
            MessageKind::kKeyDelivery);
  auto records = ReadNullifierRecords(auth::DataDir{as_dir_.path()}.nullifier_log(),
                                      auth::DataDir{as_dir_.path()}.nullifier_snapshot());
  EXPECT_EQ(records.size(), 1u);
}

TEST_F(PvsTest, Groth16EndToEnd) {
  config_.backend = zkp::BackendKind::kGroth16;
  config_.depth = 3;
  Start();
  User u = NewUser("alice");
  NewUser("bob");
  pvs_->SyncRegistry();
  const KeyRequest req = Request(u, 256);
  EXPECT_EQ(req.proof.size(), 226u);
  TunnelMessage m = Handle(req);
  ASSERT_EQ(m.kind, MessageKind::kKeyDelivery) << ReasonOf(m);
  EXPECT_EQ(KemDecap({m.payload}, u.note.sk).size(), 256u);
  EXPECT_EQ(ReasonOf(Handle(req)), "nullifier-spent");
  KeyRequest bad = req;
  bad.proof[100] ^= 4;
  bad.statement.nullifier.value = Sha256(Bytes{2});
  EXPECT_EQ(ReasonOf(Handle(bad)), "proof-invalid");
}

}  // namespace
}  // namespace anonkey::pvs
