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
#include <thread>

#include <gtest/gtest.h>

#include "anonkey/auth/auth_server.h"
#include "anonkey/auth/http_service.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"
#include "anonkey/core/note.h"
#include "httplib.h"
#include "json.hpp"
#include "oracle.h"
#include "test_util.h"

namespace anonkey::auth {
namespace {

using anonkey::testing::Enroll;
using anonkey::testing::Enrolled;
using anonkey::testing::ScopedTempDir;
using nlohmann::json;

class AuthServerTest : public ::testing::Test {
 protected:
  AuthServerTest()
      : entropy_(11), ca_(TestCa::Generate(entropy_)) {
    config_.depth = 2;
    config_.backend = zkp::BackendKind::kMock;
    config_.ca_verify_key = ca_.verify_key();
    config_.test_seed = 5;
  }

  std::unique_ptr<AuthServer> NewServer() {
    return AuthServer::ServerSetup(dir_.path(), config_);
  }

  Commitment FreshCommitment() {
    Note n = UserInit(config_.protocol.lambda, config_.protocol.kem_profile,
                      entropy_);
    return DeriveCommitment(n, Hasher(config_.protocol.hash_profile));
  }

  RegisterResult RegisterAs(AuthServer& s, const Enrolled& u,
                            const Commitment& c) {
    return s.Register(u.cert.Serialize(), c,
                      Sign(c.value.bytes, u.keys.signing_key));
  }

  ScopedTempDir dir_;
  MockEntropySource entropy_;
  TestCa ca_;
  ServerConfig config_;
};

TEST_F(AuthServerTest, SetupCreatesEmptyTree) {
  auto s = NewServer();
  auto snap = s->Snapshot();
  EXPECT_EQ(snap->tree.next_free(), 0u);
  EXPECT_TRUE(snap->old_roots.empty());
  EXPECT_TRUE(snap->audit_log.empty());
  // Empty depth-2 algebraic tree from first principles: leaves H(0x00),
  // folded twice with the native Poseidon node hash.
  Hasher h(HashProfile::kAlgebraic);
  Digest e = h.Hash(Bytes{0x00});
  e = h.HashNode(e, e);
  e = h.HashNode(e, e);
  EXPECT_EQ(s->Root(), e);
  for (const char* f : {"server.json", "registry.bin", "nullifiers.log",
                        "crs/proving.key", "crs/verification.key",
                        "crs/fingerprint.hex"}) {
    EXPECT_TRUE(std::filesystem::exists(dir_.path() / f)) << f;
  }
}

TEST_F(AuthServerTest, EmptyRootMatchesShaOracle) {
  config_.protocol.hash_profile = HashProfile::kSha256;
  config_.protocol.lambda = 128;
  auto s = NewServer();
  oracle::Digest32 e = oracle::Sha256({0x00});
  for (int level = 0; level < 2; ++level) {
    oracle::Bytes cat(e.begin(), e.end());
    cat.insert(cat.end(), e.begin(), e.end());
    e = oracle::Sha256(cat);
  }
  const Digest root = s->Root();
  EXPECT_EQ(Bytes(root.bytes.begin(), root.bytes.end()),
            Bytes(e.begin(), e.end()));
}

TEST_F(AuthServerTest, SecondSetupNeedsReset) {
  NewServer();
  EXPECT_THROW(NewServer(), PreconditionError);
  auto s = AuthServer::ServerSetup(dir_.path(), config_, /*reset=*/true);
  EXPECT_EQ(s->Snapshot()->tree.next_free(), 0u);
}

TEST_F(AuthServerTest, RegistrationAppendsAndPersists) {
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  const Digest before = s->Root();
  const Commitment c = FreshCommitment();
  RegisterResult r = RegisterAs(*s, alice, c);
  ASSERT_TRUE(r.accepted());
  EXPECT_NE(r.new_root, before);
  EXPECT_EQ(r.new_root, s->Root());
  auto snap = s->Snapshot();
  EXPECT_EQ(snap->tree.Leaf(0), c.value);
  ASSERT_EQ(snap->old_roots.size(), 1u);
  EXPECT_EQ(snap->old_roots[0], before);
  ASSERT_EQ(snap->audit_log.size(), 1u);
  EXPECT_EQ(snap->audit_log[0].subject_id, "alice");
  EXPECT_EQ(snap->audit_log[0].commitment, c);

  auto reopened = AuthServer::Open(dir_.path());
  EXPECT_EQ(reopened->Root(), s->Root());
  EXPECT_EQ(reopened->Snapshot()->old_roots, snap->old_roots);
  EXPECT_EQ(reopened->Snapshot()->audit_log, snap->audit_log);
}

TEST_F(AuthServerTest, RejectionsLeaveStateUntouched) {
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  ASSERT_TRUE(RegisterAs(*s, alice, FreshCommitment()).accepted());
  const Bytes disk = ReadFileBytes(DataDir{dir_.path()}.registry());
  const auto snap = s->Snapshot();

  const Commitment c = FreshCommitment();
  // Signature by a key the certificate does not name.
  Enrolled mallory = Enroll(ca_, "mallory", entropy_);
  EXPECT_EQ(s->Register(alice.cert.Serialize(), c,
                        Sign(c.value.bytes, mallory.keys.signing_key))
                .status,
            RegisterStatus::kBadSignature);
  // Signature over a different commitment.
  const Commitment other = FreshCommitment();
  EXPECT_EQ(s->Register(alice.cert.Serialize(), c,
                        Sign(other.value.bytes, alice.keys.signing_key))
                .status,
            RegisterStatus::kBadSignature);
  // Certificate from another CA.
  MockEntropySource e2(99);
  TestCa rogue = TestCa::Generate(e2);
  Enrolled eve = Enroll(rogue, "eve", e2);
  EXPECT_EQ(RegisterAs(*s, eve, c).status, RegisterStatus::kBadCertificate);
  // Garbage certificate bytes.
  EXPECT_EQ(s->Register(Bytes{1, 2, 3}, c,
                        Sign(c.value.bytes, alice.keys.signing_key))
                .status,
            RegisterStatus::kBadCertificate);
  // Not a canonical field element under the algebraic profile.
  Commitment junk;
  junk.value.bytes.fill(0xff);
  EXPECT_EQ(RegisterAs(*s, alice, junk).status, RegisterStatus::kMalformed);
  // Duplicate.
  EXPECT_EQ(RegisterAs(*s, alice, snap->audit_log[0].commitment).status,
            RegisterStatus::kDuplicate);

  EXPECT_EQ(s->Snapshot(), snap);
  EXPECT_EQ(ReadFileBytes(DataDir{dir_.path()}.registry()), disk);
}

TEST_F(AuthServerTest, CapacityIsEnforced) {
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  for (int i = 0; i < 4; ++i) {
    ASSERT_TRUE(RegisterAs(*s, alice, FreshCommitment()).accepted());
  }
  EXPECT_EQ(RegisterAs(*s, alice, FreshCommitment()).status,
            RegisterStatus::kCapacity);
  EXPECT_EQ(s->Snapshot()->tree.next_free(), 4u);
}

TEST_F(AuthServerTest, OldRootsTrackEveryPriorRoot) {
  config_.depth = 4;
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  std::vector<Digest> roots = {s->Root()};
  for (int i = 0; i < 10; ++i) {
    ASSERT_TRUE(RegisterAs(*s, alice, FreshCommitment()).accepted());
    roots.push_back(s->Root());
  }
  auto snap = s->Snapshot();
  // old_roots is exactly the list of roots before each registration.
  EXPECT_EQ(snap->old_roots,
            std::vector<Digest>(roots.begin(), roots.end() - 1));
  EXPECT_EQ(snap->audit_log.size(), snap->tree.next_free());
}

TEST_F(AuthServerTest, RetentionKeepsNewestRoots) {
  config_.depth = 4;
  config_.old_roots_retention = 3;
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  std::vector<Digest> roots = {s->Root()};
  for (int i = 0; i < 6; ++i) {
    ASSERT_TRUE(RegisterAs(*s, alice, FreshCommitment()).accepted());
    roots.push_back(s->Root());
  }
  EXPECT_EQ(s->Snapshot()->old_roots,
            std::vector<Digest>(roots.end() - 4, roots.end() - 1));
}

TEST_F(AuthServerTest, SnapshotsAreNeverTorn) {
  config_.depth = 6;
  auto s = NewServer();
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  std::vector<Commitment> cs;
  for (int i = 0; i < 40; ++i) cs.push_back(FreshCommitment());
  std::atomic<bool> done{false};
  std::atomic<int> checks{0};
  std::thread reader([&] {
    while (!done) {
      auto snap = s->Snapshot();
      const uint64_t n = snap->tree.next_free();
      // Root must be the fold of exactly the first n leaves.
      merkle::MerkleTree rebuilt(snap->tree.profile(), snap->tree.depth());
      for (uint64_t i = 0; i < n; ++i) rebuilt.AddLeaf(snap->tree.Leaf(i));
      if (rebuilt.Root() != snap->tree.Root() || snap->old_roots.size() != n ||
          snap->audit_log.size() != n) {
        ADD_FAILURE() << "torn snapshot at " << n;
        return;
      }
      ++checks;
    }
  });
  for (const auto& c : cs) ASSERT_TRUE(RegisterAs(*s, alice, c).accepted());
  done = true;
  reader.join();
  EXPECT_GT(checks.load(), 0);
}

TEST_F(AuthServerTest, OpenRejectsMismatchedCrs) {
  NewServer();
  ScopedTempDir other;
  ServerConfig c2 = config_;
  c2.depth = 3;
  AuthServer::ServerSetup(other.path(), c2);
  std::filesystem::remove_all(DataDir{dir_.path()}.crs());
  std::filesystem::copy(DataDir{other.path()}.crs(),
                        DataDir{dir_.path()}.crs());
  EXPECT_THROW(AuthServer::Open(dir_.path()), zkp::FingerprintMismatchError);
}

TEST(RegistryStateTest, RejectsInconsistentAuditLog) {
  RegistryState s{merkle::MerkleTree(HashProfile::kSha256, 2), {}, {}};
  s.tree.AddLeaf(Sha256(Bytes{1}));
  s.old_roots.push_back(s.tree.Root());
  EXPECT_THROW(RegistryState::Parse(s.Serialize()), ParseError);
  s.audit_log.push_back({"x", {Sha256(Bytes{1})}, 7});
  EXPECT_EQ(RegistryState::Parse(s.Serialize()).audit_log, s.audit_log);
  Bytes b = s.Serialize();
  b.pop_back();
  EXPECT_THROW(RegistryState::Parse(b), ParseError);
}

TEST(ServerConfigTest, JsonRoundTrip) {
  ServerConfig c;
  c.depth = 5;
  c.backend = zkp::BackendKind::kMock;
  c.ca_verify_key = Bytes(32, 7);
  c.old_roots_retention = 9;
  c.test_seed = 3;
  ServerConfig d = ServerConfig::FromJson(c.ToJson());
  EXPECT_EQ(d.ToJson(), c.ToJson());
  EXPECT_EQ(d.relation(), c.relation());
  c.ca_verify_key.resize(31);
  EXPECT_THROW(c.Validate(), ConfigError);
}

class AuthHttpTest : public AuthServerTest {
 protected:
  void SetUp() override {
    server_ = NewServer();
    service_ = std::make_unique<AuthHttpService>(
        *server_, [this]() -> std::vector<Digest> {
          if (fail_nullifiers_) throw IoError("unreachable");
          return {Sha256(Bytes{9})};
        });
    port_ = service_->Start("127.0.0.1", 0);
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  json Get(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect) << path;
    return json::parse(res->body);
  }

  std::unique_ptr<AuthServer> server_;
  std::unique_ptr<AuthHttpService> service_;
  std::unique_ptr<httplib::Client> client_;
  uint16_t port_ = 0;
  bool fail_nullifiers_ = false;
};

TEST_F(AuthHttpTest, RegisterAndFetch) {
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  const Commitment c = FreshCommitment();
  json req = {{"certificate", ToHex(alice.cert.Serialize())},
              {"commitment", c.value.Hex()},
              {"signature", ToHex(Sign(c.value.bytes, alice.keys.signing_key))}};
  auto res = client_->Post("/v1/register", req.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  json body = json::parse(res->body);
  EXPECT_TRUE(body["accepted"].get<bool>());
  EXPECT_EQ(body["new_root"], server_->Root().Hex());

  res = client_->Post("/v1/register", req.dump(), "application/json");
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(json::parse(res->body)["reason"], "duplicate-commitment");

  json tree = Get("/v1/tree");
  EXPECT_EQ(tree["next_free"], 1);
  merkle::MerkleTree t = merkle::MerkleTree::Deserialize(
      FromHex(tree["snapshot"].get<std::string>()),
      Digest::FromHex(tree["root"].get<std::string>()));
  EXPECT_EQ(t.Leaf(0), c.value);

  json roots = Get("/v1/old-roots");
  EXPECT_EQ(roots["old_roots"].size(), 1u);

  json vk = Get("/v1/vk");
  EXPECT_EQ(FromHex(vk["verification_key"].get<std::string>()),
            server_->crs().verification_key);
  auto pk = client_->Get("/v1/proving-key");
  ASSERT_TRUE(pk);
  EXPECT_EQ(Bytes(pk->body.begin(), pk->body.end()),
            server_->crs().proving_key);

  EXPECT_EQ(Get("/v1/nullifiers")["nullifiers"][0], Sha256(Bytes{9}).Hex());
  fail_nullifiers_ = true;
  Get("/v1/nullifiers", 503);
}

TEST_F(AuthHttpTest, RejectsMalformedAndForgedRequests) {
  auto res = client_->Post("/v1/register", "{not json", "application/json");
  EXPECT_EQ(res->status, 400);
  Enrolled alice = Enroll(ca_, "alice", entropy_);
  const Commitment c = FreshCommitment();
  json req = {{"certificate", ToHex(alice.cert.Serialize())},
              {"commitment", c.value.Hex()},
              {"signature", ToHex(Bytes(64, 0))}};
  res = client_->Post("/v1/register", req.dump(), "application/json");
  EXPECT_EQ(res->status, 403);
  EXPECT_EQ(json::parse(res->body)["reason"], "bad-signature");
  EXPECT_EQ(server_->Snapshot()->tree.next_free(), 0u);
}

}  // namespace
}  // namespace anonkey::auth
