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

#include <sys/stat.h>

#include <thread>

#include <gtest/gtest.h>

#include "anonkey/auth/auth_server.h"
#include "anonkey/auth/http_service.h"
#include "anonkey/client/client.h"
#include "anonkey/client/user_store.h"
#include "anonkey/core/file_util.h"
#include "anonkey/pvs/pvs.h"
#include "test_util.h"

namespace anonkey::client {
namespace {

using anonkey::testing::Enroll;
using anonkey::testing::Enrolled;
using anonkey::testing::ScopedTempDir;

// Cheap parameters; production stores use the defaults.
const ScryptParams kFastScrypt{1u << 10, 8, 1};
constexpr uint64_t kPvsSeed = 77;

unsigned ModeOf(const std::filesystem::path& p) {
  struct stat st;
  if (::stat(p.c_str(), &st) != 0) return 0;
  return st.st_mode & 0777;
}

bool Contains(ByteSpan hay, ByteSpan needle) {
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

TEST(UserStoreTest, RoundTripAndPermissions) {
  ScopedTempDir dir;
  const auto path = dir.path() / "wallet" / "notes.bin";
  MockEntropySource e(1);
  std::string id;
  Note note = UserInit(256, KemProfile::kDhkem, e);
  {
    auto s = UserStore::Open(path, "correct horse", kFastScrypt);
    id = s->Add(note, HashProfile::kAlgebraic);
    s->SetCachedTree(Bytes{1, 2, 3});
    s->Advance(id, NoteState::kRegistered, Sha256(Bytes{4}));
  }
  EXPECT_EQ(ModeOf(path), 0600u);
  // Encrypted at rest: no note field appears in the file.
  const Bytes raw = ReadFileBytes(path);
  EXPECT_FALSE(Contains(raw, note.rho));
  EXPECT_FALSE(Contains(raw, note.sk.span()));
  EXPECT_FALSE(Contains(raw, note.pk));

  auto s = UserStore::Open(path, "correct horse");
  const NoteRecord& rec = s->Get(id);
  EXPECT_EQ(rec.note.rho, note.rho);
  EXPECT_EQ(rec.note.sk, note.sk);
  EXPECT_EQ(rec.state, NoteState::kRegistered);
  EXPECT_EQ(rec.registered_root, Sha256(Bytes{4}));
  EXPECT_EQ(rec.commitment, DeriveCommitment(note, Hasher(HashProfile::kAlgebraic)));
  EXPECT_EQ(s->cached_tree(), (Bytes{1, 2, 3}));
  EXPECT_EQ(s->FindByPublicKey(note.pk), &rec);
}

TEST(UserStoreTest, WrongPassphraseAndCorruptionAreDetected) {
  ScopedTempDir dir;
  const auto path = dir.path() / "notes.bin";
  MockEntropySource e(2);
  UserStore::Open(path, "pw", kFastScrypt)
      ->Add(UserInit(128, KemProfile::kDhkem, e), HashProfile::kSha256);
  EXPECT_THROW(UserStore::Open(path, "other"), WrongPassphraseError);
  Bytes raw = ReadFileBytes(path);
  raw[raw.size() - 20] ^= 1;
  WriteFileAtomic(path, raw);
  EXPECT_THROW(UserStore::Open(path, "pw"), WrongPassphraseError);
  WriteFileAtomic(path, Bytes{1, 2, 3});
  EXPECT_THROW(UserStore::Open(path, "pw"), ParseError);
}

TEST(UserStoreTest, LockIsExclusive) {
  ScopedTempDir dir;
  const auto path = dir.path() / "notes.bin";
  auto held = UserStore::Open(path, "pw", kFastScrypt);
  EXPECT_THROW(UserStore::Open(path, "pw"), IoError);
  held.reset();
  EXPECT_NO_THROW(UserStore::Open(path, "pw"));
}

TEST(UserStoreTest, StatesOnlyMoveForward) {
  ScopedTempDir dir;
  MockEntropySource e(3);
  auto s = UserStore::Open(dir.path() / "n.bin", "pw", kFastScrypt);
  const std::string id =
      s->Add(UserInit(256, KemProfile::kDhkem, e), HashProfile::kAlgebraic);
  EXPECT_THROW(s->Advance(id, NoteState::kSpent), PreconditionError);
  EXPECT_THROW(s->Advance(id, NoteState::kCreated), PreconditionError);
  s->Advance(id, NoteState::kRegistered);
  EXPECT_THROW(s->Advance(id, NoteState::kRegistered), PreconditionError);
  s->Advance(id, NoteState::kSpent);
  EXPECT_THROW(s->Advance(id, NoteState::kRegistered), PreconditionError);
  EXPECT_THROW(s->Get("nope"), PreconditionError);
}

// AS over HTTP and PVS over TCP, both in this process.
class ClientFlowTest : public ::testing::Test {
 protected:
  ClientFlowTest() : entropy_(21), ca_(TestCa::Generate(entropy_)) {}

  void SetUp() override {
    auth::ServerConfig config;
    config.depth = 4;
    config.backend = zkp::BackendKind::kMock;
    config.ca_verify_key = ca_.verify_key();
    config.test_seed = 2;
    protocol_ = config.protocol;
    server_ = auth::AuthServer::ServerSetup(dir_.path() / "server", config);
    http_ = std::make_unique<auth::AuthHttpService>(
        *server_, [] { return std::vector<Digest>{}; });
    as_.emplace("http://127.0.0.1:" +
                std::to_string(http_->Start("127.0.0.1", 0)));
    pvs::PvsOptions opts;
    opts.max_t = 1024;
    pvs_ = pvs::Pvs::OpenShared(auth::DataDir{dir_.path() / "server"},
                                std::make_shared<MockEntropySource>(kPvsSeed),
                                opts, pvs::MakeInProcessRegistry(*server_));
    listener_ = std::make_unique<tunnel::TcpListener>("127.0.0.1", 0);
    serve_ = std::thread([this] { pvs_->Serve(*listener_); });
    prover_.emplace(zkp::Prover::Load(as_->FetchProvingKey()));
    store_ = UserStore::Open(dir_.path() / "user" / "notes.bin", "pw",
                             kFastScrypt);
    client_.emplace(*store_);
    user_ = Enroll(ca_, "alice", entropy_);
  }

  void TearDown() override {
    listener_->Close();
    serve_.join();
    http_->Stop();
  }

  std::string RegisteredNote() {
    const std::string id = client_->Init(protocol_, entropy_);
    client_->Auth(id, user_.cert.Serialize(), user_.keys.signing_key, *as_);
    return id;
  }

  KeyResult Redeem(Client& c, const tunnel::KeyRequest& bundle, uint32_t t,
                   std::shared_ptr<tunnel::Transcript> transcript = nullptr) {
    pvs_->SyncRegistry();
    std::unique_ptr<tunnel::FrameStream> s =
        tunnel::ConnectTcp("127.0.0.1", listener_->port());
    if (transcript) {
      s = std::make_unique<tunnel::RecordingStream>(std::move(s), transcript);
    }
    return c.RequestKey(bundle, t, *s);
  }

  ExitCode CodeOf(const std::function<void()>& fn, std::string* reason) {
    try {
      fn();
    } catch (const ClientError& e) {
      if (reason) *reason = e.reason();
      return e.code();
    }
    return ExitCode::kOk;
  }

  ScopedTempDir dir_;
  MockEntropySource entropy_;
  TestCa ca_;
  ProtocolConfig protocol_;
  std::unique_ptr<auth::AuthServer> server_;
  std::unique_ptr<auth::AuthHttpService> http_;
  std::optional<AsClient> as_;
  std::unique_ptr<pvs::Pvs> pvs_;
  std::unique_ptr<tunnel::TcpListener> listener_;
  std::thread serve_;
  std::optional<zkp::Prover> prover_;
  std::unique_ptr<UserStore> store_;
  std::optional<Client> client_;
  Enrolled user_;
};

TEST_F(ClientFlowTest, HappyPath) {
  const std::string id = RegisteredNote();
  EXPECT_EQ(store_->Get(id).state, NoteState::kRegistered);
  EXPECT_EQ(store_->Get(id).registered_root, server_->Root());
  tunnel::KeyRequest bundle = client_->Prove(id, *as_, *prover_);
  EXPECT_EQ(store_->Get(id).state, NoteState::kRegistered);
  EXPECT_EQ(bundle.statement.root, server_->Root());
  EXPECT_TRUE(zkp::Verifier::Load(as_->FetchVerificationKey())
                  .Verify(bundle.statement, bundle.proof)
                  .accepted);
  // The bundle file format round-trips.
  bundle = tunnel::KeyRequest::Parse(bundle.Serialize());

  KeyResult r = Redeem(*client_, bundle, 64);
  EXPECT_EQ(Bytes(r.key.span().begin(), r.key.span().end()),
            MockEntropySource::StreamPrefix(kPvsSeed, 64));
  EXPECT_EQ(store_->Get(id).state, NoteState::kSpent);
  const auto key_path = dir_.path() / "user" / "key.bin";
  WriteKeyFile(key_path, r.key);
  EXPECT_EQ(ModeOf(key_path), 0600u);
  EXPECT_EQ(ReadFileBytes(key_path).size(), 64u);
}

TEST_F(ClientFlowTest, WrongStateFailsBeforeAnyTraffic) {
  const std::string id = RegisteredNote();
  AsClient dead("http://127.0.0.1:1");
  std::string reason;
  EXPECT_EQ(CodeOf([&] {
              client_->Auth(id, user_.cert.Serialize(), user_.keys.signing_key,
                            dead);
            }, &reason),
            ExitCode::kLocal);
  EXPECT_EQ(reason, "wrong-state");
  const std::string fresh = client_->Init(protocol_, entropy_);
  EXPECT_EQ(CodeOf([&] { client_->Prove(fresh, dead, *prover_); }, &reason),
            ExitCode::kLocal);
  // A stream nobody listens on: any traffic attempt would throw.
  auto [a, b] = tunnel::MakePipe();
  b->Close();
  tunnel::KeyRequest bogus;
  bogus.pk = store_->Get(fresh).note.pk;
  EXPECT_EQ(CodeOf([&] { client_->RequestKey(bogus, 32, *a); }, &reason),
            ExitCode::kLocal);
}

TEST_F(ClientFlowTest, RejectedRegistrationKeepsNoteCreated) {
  const std::string id = client_->Init(protocol_, entropy_);
  Enrolled mallory = Enroll(ca_, "mallory", entropy_);
  std::string reason;
  EXPECT_EQ(CodeOf([&] {
              client_->Auth(id, user_.cert.Serialize(),
                            mallory.keys.signing_key, *as_);
            }, &reason),
            ExitCode::kAuthServer);
  EXPECT_EQ(reason, "bad-signature");
  EXPECT_EQ(store_->Get(id).state, NoteState::kCreated);
  AsClient dead("http://127.0.0.1:1");
  EXPECT_EQ(CodeOf([&] {
              client_->Auth(id, user_.cert.Serialize(), user_.keys.signing_key,
                            dead);
            }, nullptr),
            ExitCode::kAuthServer);
  EXPECT_EQ(store_->Get(id).state, NoteState::kCreated);
}

TEST_F(ClientFlowTest, StaleTreeReportsAbsentCommitment) {
  const merkle::MerkleTree before = as_->FetchTree();
  const std::string id = RegisteredNote();
  std::string reason;
  EXPECT_EQ(CodeOf([&] { client_->Prove(id, before, *prover_); }, &reason),
            ExitCode::kLocal);
  EXPECT_EQ(reason, "commitment-absent");
}

TEST_F(ClientFlowTest, ProvingTwiceGivesTheSameStatement) {
  const std::string id = RegisteredNote();
  auto a = client_->Prove(id, *as_, *prover_);
  auto b = client_->Prove(id, *as_, *prover_);
  EXPECT_EQ(a.statement, b.statement);
  auto v = zkp::Verifier::Load(as_->FetchVerificationKey());
  EXPECT_TRUE(v.Verify(a.statement, a.proof).accepted);
  EXPECT_TRUE(v.Verify(b.statement, b.proof).accepted);
}

TEST_F(ClientFlowTest, SecondRedemptionIsRefused) {
  const std::string id = RegisteredNote();
  const auto bundle = client_->Prove(id, *as_, *prover_);
  // Copy of the wallet taken before redemption, as on a second device.
  const auto copy = dir_.path() / "copy.bin";
  std::filesystem::copy_file(store_->path(), copy);
  Redeem(*client_, bundle, 32);

  auto other_store = UserStore::Open(copy, "pw");
  Client other(*other_store);
  std::string reason;
  EXPECT_EQ(CodeOf([&] { Redeem(other, bundle, 32); }, &reason),
            ExitCode::kValidationServer);
  EXPECT_EQ(reason, "nullifier-spent");
  EXPECT_EQ(other_store->Get(id).state, NoteState::kSpent);
  // The original wallet refuses locally.
  EXPECT_EQ(CodeOf([&] { Redeem(*client_, bundle, 32); }, &reason),
            ExitCode::kLocal);
}

TEST_F(ClientFlowTest, OversizedKeyIsRejectedBeforeSpending) {
  const std::string id = RegisteredNote();
  const auto bundle = client_->Prove(id, *as_, *prover_);
  std::string reason;
  EXPECT_EQ(CodeOf([&] { Redeem(*client_, bundle, 1025); }, &reason),
            ExitCode::kValidationServer);
  EXPECT_EQ(reason, "key-size-out-of-range");
  EXPECT_EQ(store_->Get(id).state, NoteState::kRegistered);
  EXPECT_EQ(pvs_->nullifiers().size(), 0u);
  EXPECT_EQ(Redeem(*client_, bundle, 1024).key.size(), 1024u);
}

TEST_F(ClientFlowTest, TunnelCarriesNoLinkingSecrets) {
  for (int i = 0; i < 5; ++i) {
    const std::string id = RegisteredNote();
    const auto bundle = client_->Prove(id, *as_, *prover_);
    auto transcript = std::make_shared<tunnel::Transcript>();
    Redeem(*client_, bundle, 300, transcript);
    const NoteRecord& rec = store_->Get(id);
    Bytes all;
    for (const auto& e : transcript->entries()) Append(all, e.frame);
    EXPECT_FALSE(Contains(all, rec.note.rho));
    EXPECT_FALSE(Contains(all, rec.note.sk.span()));
    EXPECT_FALSE(Contains(all, rec.commitment.value.bytes));
    // Chunking splits fields; scan each 16-byte window of the secrets too.
    for (size_t off = 0; off + 16 <= rec.note.rho.size(); off += 8) {
      EXPECT_FALSE(Contains(all, ByteSpan(rec.note.rho).subspan(off, 16)));
    }
    for (size_t off = 0; off + 16 <= Digest::kSize; off += 8) {
      EXPECT_FALSE(
          Contains(all, ByteSpan(rec.commitment.value.bytes).subspan(off, 16)));
    }
    // Card side: each frame we sent answers exactly one reader command.
    std::vector<tunnel::Transcript::Entry> reader_view;
    for (auto e : transcript->entries()) {
      e.direction = e.direction == tunnel::Transcript::Direction::kCommand
                        ? tunnel::Transcript::Direction::kResponse
                        : tunnel::Transcript::Direction::kCommand;
      reader_view.push_back(std::move(e));
    }
    EXPECT_FALSE(tunnel::CheckReaderInitiates(reader_view));
  }
}

}  // namespace
}  // namespace anonkey::client
