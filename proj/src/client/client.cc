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

#include "anonkey/client/client.h"

#include <spdlog/spdlog.h>

#include "anonkey/core/file_util.h"
#include "anonkey/core/kem.h"
#include "httplib.h"
#include "json.hpp"

namespace anonkey::client {
namespace {

using nlohmann::json;

[[noreturn]] void AsFailure(const std::string& what) {
  throw ClientError(ExitCode::kAuthServer, "unreachable", what);
}

httplib::Result Get(const std::string& url, const std::string& path) {
  httplib::Client cli(url);
  cli.set_connection_timeout(10);
  cli.set_read_timeout(120);
  auto res = cli.Get(path);
  if (!res) AsFailure("cannot reach " + url + path);
  if (res->status != 200) {
    AsFailure(url + path + " returned HTTP " + std::to_string(res->status));
  }
  return res;
}

}  // namespace

RegisterResponse AsClient::Register(ByteSpan certificate, const Commitment& c,
                                    ByteSpan signature) const {
  httplib::Client cli(url_);
  cli.set_connection_timeout(10);
  json req = {{"certificate", ToHex(certificate)},
              {"commitment", c.value.Hex()},
              {"signature", ToHex(signature)}};
  auto res = cli.Post("/v1/register", req.dump(), "application/json");
  if (!res) AsFailure("cannot reach " + url_);
  RegisterResponse out;
  try {
    json body = json::parse(res->body);
    out.accepted = body.at("accepted").get<bool>();
    out.reason = body.value("reason", "");
    if (out.accepted) {
      out.new_root = Digest::FromHex(body.at("new_root").get<std::string>());
    }
  } catch (const std::exception& e) {
    AsFailure(std::string("bad register response: ") + e.what());
  }
  return out;
}

merkle::MerkleTree AsClient::FetchTree() const {
  auto res = Get(url_, "/v1/tree");
  try {
    json body = json::parse(res->body);
    return merkle::MerkleTree::Deserialize(
        FromHex(body.at("snapshot").get<std::string>()),
        Digest::FromHex(body.at("root").get<std::string>()));
  } catch (const std::exception& e) {
    AsFailure(std::string("bad tree snapshot: ") + e.what());
  }
}

Bytes AsClient::FetchVerificationKey() const {
  auto res = Get(url_, "/v1/vk");
  try {
    return FromHex(
        json::parse(res->body).at("verification_key").get<std::string>());
  } catch (const std::exception& e) {
    AsFailure(std::string("bad verification key response: ") + e.what());
  }
}

Bytes AsClient::FetchProvingKey() const {
  auto res = Get(url_, "/v1/proving-key");
  return Bytes(res->body.begin(), res->body.end());
}

std::string Client::Init(const ProtocolConfig& protocol,
                         EntropySource& entropy) {
  protocol.Validate();
  return store_.Add(UserInit(protocol.lambda, protocol.kem_profile, entropy),
                    protocol.hash_profile);
}

RegisterResponse Client::Auth(std::string_view id, ByteSpan certificate,
                              const SecretBytes& signing_key,
                              const AsClient& as) {
  const NoteRecord& rec = store_.Get(id);
  if (rec.state != NoteState::kCreated) {
    throw ClientError(ExitCode::kLocal, "wrong-state",
                      "note " + rec.id + " is already " +
                          std::string(NoteStateName(rec.state)));
  }
  const Bytes sig = Sign(rec.commitment.value.bytes, signing_key);
  RegisterResponse r = as.Register(certificate, rec.commitment, sig);
  if (!r.accepted) {
    throw ClientError(ExitCode::kAuthServer, r.reason,
                      "registration rejected: " + r.reason);
  }
  store_.Advance(id, NoteState::kRegistered, r.new_root);
  return r;
}

tunnel::KeyRequest Client::Prove(std::string_view id,
                                 const merkle::MerkleTree& tree,
                                 const zkp::Prover& prover) {
  const NoteRecord& rec = store_.Get(id);
  if (rec.state != NoteState::kRegistered) {
    throw ClientError(ExitCode::kLocal, "wrong-state",
                      "note " + rec.id + " is " +
                          std::string(NoteStateName(rec.state)) +
                          ", expected registered");
  }
  if (!tree.Contains(rec.commitment.value)) {
    throw ClientError(ExitCode::kLocal, "commitment-absent",
                      "commitment of note " + rec.id +
                          " is not in the fetched tree (stale registration?)");
  }
  auto [x, w] = zkp::MakeStatementAndWitness(rec.note, tree);
  tunnel::KeyRequest bundle;
  bundle.proof = prover.Prove(x, w);
  bundle.statement = x;
  bundle.pk = rec.note.pk;
  return bundle;
}

tunnel::KeyRequest Client::Prove(std::string_view id, const AsClient& as,
                                 const zkp::Prover& prover) {
  const NoteRecord& rec = store_.Get(id);
  if (rec.state != NoteState::kRegistered) {
    throw ClientError(ExitCode::kLocal, "wrong-state",
                      "note " + rec.id + " is " +
                          std::string(NoteStateName(rec.state)) +
                          ", expected registered");
  }
  merkle::MerkleTree tree = as.FetchTree();
  store_.SetCachedTree(tree.Serialize());
  return Prove(id, tree, prover);
}

KeyResult Client::RequestKey(const tunnel::KeyRequest& bundle, uint32_t t,
                             tunnel::FrameStream& stream) {
  const NoteRecord* rec = store_.FindByPublicKey(bundle.pk);
  if (!rec) {
    throw ClientError(ExitCode::kLocal, "unknown-note",
                      "no note in this store matches the bundle");
  }
  const std::string id = rec->id;
  if (rec->state != NoteState::kRegistered) {
    throw ClientError(ExitCode::kLocal, "wrong-state",
                      "note " + id + " is " +
                          std::string(NoteStateName(rec->state)));
  }
  if (t == 0) {
    throw ClientError(ExitCode::kUsage, "key-size-out-of-range",
                      "key size must be positive");
  }
  tunnel::KeyRequest req = bundle;
  req.t = t;

  tunnel::CardApplet applet;
  applet.SetOutgoing(
      tunnel::TunnelMessage{tunnel::MessageKind::kKeyRequest, req.Serialize()}
          .Encode());
  std::optional<Bytes> reply;
  const auto start = std::chrono::steady_clock::now();
  try {
    reply = tunnel::RunCardSession(stream, applet);
  } catch (const std::exception& e) {
    throw ClientError(ExitCode::kValidationServer, "transport",
                      std::string("tunnel session failed: ") + e.what());
  }
  if (!reply) {
    throw ClientError(ExitCode::kValidationServer, "transport",
                      "validation server closed the session without reply");
  }
  tunnel::TunnelMessage msg;
  try {
    msg = tunnel::TunnelMessage::Decode(*reply);
  } catch (const ParseError& e) {
    throw ClientError(ExitCode::kValidationServer, "malformed",
                      std::string("bad reply: ") + e.what());
  }
  if (msg.kind == tunnel::MessageKind::kError) {
    const std::string reason = msg.ErrorReason();
    if (reason == "nullifier-spent" || reason == "delivery-failed") {
      store_.Advance(id, NoteState::kSpent);
      if (reason == "delivery-failed") {
        spdlog::error("note {} was accepted but no key was delivered; it is "
                      "now spent",
                      id);
      }
    }
    throw ClientError(ExitCode::kValidationServer, reason,
                      "key request rejected: " + reason);
  }
  if (msg.kind != tunnel::MessageKind::kKeyDelivery) {
    throw ClientError(ExitCode::kValidationServer, "malformed",
                      "unexpected reply kind");
  }
  // The server has consumed the nullifier; the note is spent either way.
  store_.Advance(id, NoteState::kSpent);
  KeyResult out;
  out.session = std::chrono::steady_clock::now() - start;
  try {
    out.key = KemDecap({msg.payload}, store_.Get(id).note.sk);
  } catch (const std::exception& e) {
    throw ClientError(ExitCode::kLocal, "decapsulation",
                      std::string("cannot decapsulate delivered key: ") +
                          e.what());
  }
  if (out.key.size() != t) {
    throw ClientError(ExitCode::kValidationServer, "malformed",
                      "delivered key has the wrong length");
  }
  return out;
}

void WriteKeyFile(const std::filesystem::path& path, const SecretBytes& key) {
  WriteFileAtomic(path, key.span(), 0600);
}

}  // namespace anonkey::client
