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

#include "anonkey/bench/stack.h"

#include <stdlib.h>

#include <thread>

#include "anonkey/core/errors.h"

namespace anonkey::bench {

namespace {
// Keeps user key material off the validation server's mock stream.
constexpr uint64_t kUserSeedMask = 0x9e3779b97f4a7c15ull;
}  // namespace

std::string Stack::Redemption::outcome() const {
  if (delivered()) return "delivered";
  if (reply.kind == tunnel::MessageKind::kError) return reply.ErrorReason();
  return "unexpected-reply";
}

Stack::Stack(const StackOptions& options)
    : options_(options), user_entropy_(options.seed ^ kUserSeedMask) {
  std::string tmpl =
      (std::filesystem::temp_directory_path() / "anonkey_stack_XXXXXX")
          .string();
  if (!mkdtemp(tmpl.data())) throw IoError("cannot create stack directory");
  dir_ = tmpl;

  ca_.emplace(TestCa::Generate(user_entropy_));
  auth::ServerConfig config;
  config.protocol.hash_profile = options.hash_profile;
  config.protocol.kem_profile = options.kem;
  config.protocol.lambda = options.lambda;
  config.depth = options.depth;
  config.backend = options.backend;
  config.ca_verify_key = ca_->verify_key();
  config.old_roots_retention = options.old_roots_retention;
  config.test_seed = options.seed;
  as_ = auth::AuthServer::ServerSetup(dir_, config);

  EntropyConfig entropy;
  entropy.kind = EntropyKind::kMock;
  entropy.mock_seed = options.seed;
  pvs_entropy_ = MakeEntropySource(options.pvs_entropy.value_or(entropy));
  pvs::PvsOptions pvs_options;
  pvs_options.max_t = options.max_t;
  pvs_ = pvs::Pvs::OpenShared(auth::DataDir{dir_}, pvs_entropy_, pvs_options,
                              pvs::MakeInProcessRegistry(*as_));
  prover_.emplace(zkp::Prover::Load(as_->crs().proving_key));
  verifier_.emplace(zkp::Verifier::Load(as_->crs().verification_key));
}

Stack::~Stack() {
  pvs_.reset();
  as_.reset();
  std::error_code ec;
  std::filesystem::remove_all(dir_, ec);
}

zkp::RelationConfig Stack::relation() const {
  return as_->config().relation();
}

Stack::User Stack::NewUser() {
  User u;
  u.subject = "user-" + std::to_string(next_user_++);
  u.keys = GenerateSigningKey(user_entropy_);
  u.cert = ca_->Issue(u.subject, u.keys.verify_key);
  u.note = UserInit(options_.lambda, options_.kem, user_entropy_);
  u.commitment = DeriveCommitment(u.note, Hasher(options_.hash_profile));
  return u;
}

bool Stack::Register(const User& u) {
  return as_
      ->Register(u.cert.Serialize(), u.commitment,
                 Sign(u.commitment.value.bytes, u.keys.signing_key))
      .accepted();
}

Stack::User Stack::AddUser() {
  User u = NewUser();
  if (!Register(u)) throw PreconditionError("registration refused");
  return u;
}

tunnel::KeyRequest Stack::Prove(const User& u, uint32_t t) const {
  return Prove(u, t, as_->Snapshot()->tree);
}

tunnel::KeyRequest Stack::Prove(const User& u, uint32_t t,
                                const merkle::MerkleTree& tree) const {
  auto [x, w] = zkp::MakeStatementAndWitness(u.note, tree);
  return {x, prover_->Prove(x, w), t, u.note.pk};
}

Stack::Redemption Stack::Redeem(const tunnel::KeyRequest& req,
                                double bytes_per_second,
                                std::shared_ptr<tunnel::Transcript> transcript) {
  auto [reader_end, card_end] = tunnel::MakePipe();
  std::unique_ptr<tunnel::FrameStream> reader = std::move(reader_end);
  if (bytes_per_second > 0) {
    reader = std::make_unique<tunnel::RateLimitedStream>(std::move(reader),
                                                         bytes_per_second);
  }
  if (transcript) {
    reader = std::make_unique<tunnel::RecordingStream>(std::move(reader),
                                                       transcript);
  }
  Redemption out;
  std::exception_ptr reader_error;
  std::thread reader_thread([&] {
    try {
      out.session = tunnel::RunReaderSession(
          *reader, tunnel::DefaultAid(), [&](const Bytes& m) {
            return pvs_->HandleKeyRequest(m, &out.request);
          });
    } catch (...) {
      reader_error = std::current_exception();
    }
    reader->Close();
  });
  tunnel::CardApplet applet;
  applet.SetOutgoing(
      tunnel::TunnelMessage{tunnel::MessageKind::kKeyRequest, req.Serialize()}
          .Encode());
  std::optional<Bytes> reply;
  try {
    reply = tunnel::RunCardSession(*card_end, applet);
  } catch (...) {
    card_end->Close();
    reader_thread.join();
    throw;
  }
  reader_thread.join();
  if (reader_error) std::rethrow_exception(reader_error);
  if (!reply) throw tunnel::TransportError("session ended without a reply");
  out.reply = tunnel::TunnelMessage::Decode(*reply);
  return out;
}

tunnel::TunnelMessage Stack::Submit(const tunnel::KeyRequest& req) {
  return tunnel::TunnelMessage::Decode(pvs_->HandleKeyRequest(
      tunnel::TunnelMessage{tunnel::MessageKind::kKeyRequest, req.Serialize()}
          .Encode()));
}

}  // namespace anonkey::bench
