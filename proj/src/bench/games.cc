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

#include "anonkey/bench/games.h"

#include <algorithm>
#include <random>
#include <set>

#include "anonkey/bench/stack.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/file_util.h"
#include "anonkey/core/kem.h"
#include "anonkey/pvs/nullifier_store.h"
#include "anonkey/zkp/relation.h"
#include "spdlog/spdlog.h"

namespace anonkey::bench {

using nlohmann::json;

json GameReport::ToJson() const {
  json a = json::object();
  for (const auto& [k, v] : attacks) {
    a[k] = {{"attempts", v.attempts},
            {"successes", v.successes},
            {"outcomes", v.outcomes}};
  }
  return {{"game", name},         {"trials", trials},
          {"successes", successes}, {"rate", rate},
          {"passed", passed},     {"criterion", criterion},
          {"attacks", a},         {"details", details}};
}

namespace {

constexpr uint32_t kGameKeyBytes = 32;

unsigned DepthFor(size_t leaves) {
  unsigned d = 2;
  while ((uint64_t{1} << d) < leaves) ++d;
  return d;
}

bool Contains(ByteSpan hay, ByteSpan needle) {
  if (needle.empty() || hay.size() < needle.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) !=
         hay.end();
}

Bytes Concat(ByteSpan a, ByteSpan b) {
  Bytes out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void Tally(AttackTally& t, bool success, const std::string& outcome) {
  ++t.attempts;
  if (success) ++t.successes;
  ++t.outcomes[outcome];
}

void Finish(GameReport& r) {
  r.trials = 0;
  r.successes = 0;
  for (const auto& [k, v] : r.attacks) {
    r.trials += v.attempts;
    r.successes += v.successes;
  }
  r.rate = r.trials ? static_cast<double>(r.successes) / r.trials : 0;
}

Digest RandomDigest(std::mt19937_64& rng, const Hasher& h) {
  // Hashing random bytes keeps algebraic digests canonical.
  Bytes b(32);
  for (auto& x : b) x = static_cast<uint8_t>(rng());
  return h.Hash(b);
}

}  // namespace

GameReport RunUnforgeability(const GameOptions& o) {
  if (o.honest_proofs < 2) {
    throw PreconditionError("unforgeability needs two honest proofs");
  }
  GameReport rep;
  rep.name = "unforgeability";
  rep.criterion = "0 acceptances";
  StackOptions so;
  so.backend = o.backend;
  so.seed = o.seed;
  so.depth = DepthFor(o.honest_proofs + 1);
  Stack st(so);
  std::mt19937_64 rng(o.seed);
  const Hasher hasher(so.hash_profile);
  const auto config = st.relation();

  std::vector<Stack::User> users;
  std::vector<Digest> roots;
  for (size_t i = 0; i < o.honest_proofs; ++i) {
    roots.push_back(st.as().Root());
    users.push_back(st.AddUser());
  }
  st.Sync();
  std::vector<tunnel::KeyRequest> bundles;
  for (const auto& u : users) bundles.push_back(st.Prove(u, kGameKeyBytes));
  const uint64_t served_before = st.pvs_entropy().bytes_served();

  auto submit = [&](const std::string& attack, const tunnel::KeyRequest& r) {
    auto reply = st.Submit(r);
    const bool delivered = reply.kind == tunnel::MessageKind::kKeyDelivery;
    Tally(rep.attacks[attack], delivered,
          delivered ? "delivered" : reply.ErrorReason());
  };

  // Bit flips anywhere in the proof bytes.
  for (const auto& b : bundles) {
    std::vector<size_t> bits(b.proof.size() * 8);
    for (size_t i = 0; i < bits.size(); ++i) bits[i] = i;
    std::shuffle(bits.begin(), bits.end(), rng);
    const size_t n = std::min(o.mutated_bits, bits.size());
    for (size_t i = 0; i < n; ++i) {
      auto m = b;
      m.proof[bits[i] / 8] ^= static_cast<uint8_t>(1u << (bits[i] % 8));
      submit("proof-mutation", m);
    }
  }

  // Statements the proofs were not made for.
  for (size_t i = 0; i < bundles.size(); ++i) {
    for (size_t k = 0; k < o.statement_mutations; ++k) {
      auto m = bundles[i];
      switch (k % 4) {
        case 0:
          m.statement.nullifier.value = RandomDigest(rng, hasher);
          break;
        case 1: {
          // Another user's nullifier, still unspent.
          const size_t j = (i + 1 + rng() % (bundles.size() - 1)) %
                           bundles.size();
          m.statement.nullifier = bundles[j].statement.nullifier;
          break;
        }
        case 2:
          m.statement.root = roots[1 + rng() % (roots.size() - 1)];
          break;
        default:
          m.statement.nullifier.value = RandomDigest(rng, hasher);
          m.statement.root = roots[1 + rng() % (roots.size() - 1)];
          break;
      }
      submit("statement-mutation", m);
    }
  }

  // Valid proofs over a tree the registration server never published.
  {
    merkle::MerkleTree fake(so.hash_profile, so.depth);
    std::vector<Note> notes;
    for (size_t i = 0; i < o.fake_root_proofs; ++i) {
      notes.push_back(
          UserInit(so.lambda, so.kem, st.user_entropy()));
      fake.AddLeaf(DeriveCommitment(notes.back(), hasher).value);
    }
    for (const auto& n : notes) {
      auto [x, w] = zkp::MakeStatementAndWitness(n, fake);
      tunnel::KeyRequest r{x, st.prover().Prove(x, w), kGameKeyBytes, n.pk};
      if (!st.verifier().Verify(x, r.proof).accepted) {
        throw Error("fake-root proof does not verify locally");
      }
      submit("fake-root", r);
    }
  }

  // Unregistered notes claimed against the current root. The prover must
  // refuse; a sample is also checked against the circuit directly.
  {
    const auto snap = st.as().Snapshot();
    const Digest root = snap->tree.Root();
    for (size_t i = 0; i < o.trials; ++i) {
      Note n = UserInit(so.lambda, so.kem, st.user_entropy());
      zkp::Statement x{DeriveNullifier(n, hasher), root};
      zkp::Witness w{n.rho, n.pk, n.sk, DeriveCommitment(n, hasher), 0, {}};
      const uint64_t victim = rng() % users.size();
      switch (i % 3) {
        case 0:
          w.leaf_index = rng() % snap->tree.capacity();
          for (unsigned d = 0; d < so.depth; ++d) {
            w.validation.siblings.push_back(RandomDigest(rng, hasher));
          }
          break;
        case 1:
          w.leaf_index = victim;
          w.validation = snap->tree.Validation(victim);
          break;
        default:
          // Victim's leaf and path with the attacker's own secrets.
          w.leaf_index = victim;
          w.validation = snap->tree.Validation(victim);
          w.commitment = users[victim].commitment;
          break;
      }
      std::string outcome;
      bool success = false;
      try {
        Bytes proof = st.prover().Prove(x, w);
        auto reply = st.Submit({x, proof, kGameKeyBytes, n.pk});
        success = reply.kind == tunnel::MessageKind::kKeyDelivery;
        outcome = success ? "delivered" : reply.ErrorReason();
      } catch (const zkp::UnsatisfiedError&) {
        outcome = "prover-refused";
      }
      if (!success && i % 25 == 0 && o.backend == zkp::BackendKind::kGroth16) {
        bool circuit_rejects = true;
        try {
          circuit_rejects =
              zkp::BuildCircuit(config, &x, &w).FirstUnsatisfied().has_value();
        } catch (const zkp::UnsatisfiedError&) {
        }
        Tally(rep.attacks["forged-path-circuit"], !circuit_rejects,
              circuit_rejects ? "unsatisfied" : "satisfied");
      }
      Tally(rep.attacks["forged-path"], success, outcome);
    }
  }

  // Honest redemptions are the control, not attacks.
  size_t honest_ok = 0;
  for (const auto& b : bundles) honest_ok += st.Redeem(b).delivered();

  // Replays of redeemed bundles through the tunnel.
  for (size_t i = 0; i < o.trials; ++i) {
    auto red = st.Redeem(bundles[i % bundles.size()]);
    Tally(rep.attacks["replay"], red.delivered(), red.outcome());
  }

  Finish(rep);
  const uint64_t served = st.pvs_entropy().bytes_served() - served_before;
  rep.details = {{"depth", so.depth},
                 {"backend", std::string(zkp::BackendName(so.backend))},
                 {"honest_redemptions", honest_ok},
                 {"honest_expected", bundles.size()},
                 {"entropy_bytes_served", served},
                 {"entropy_bytes_expected", bundles.size() * kGameKeyBytes}};
  rep.passed = rep.successes == 0 && honest_ok == bundles.size() &&
               served == bundles.size() * kGameKeyBytes;
  return rep;
}

GameReport RunAnonymity(const GameOptions& o) {
  return RunAnonymity(o, o.trial_backend, o.trials);
}

GameReport RunAnonymity(const GameOptions& o, zkp::BackendKind backend,
                        size_t trials) {
  GameReport rep;
  rep.name = "anonymity";
  rep.criterion = "guess rate in [0.45, 0.55]";
  StackOptions so;
  so.backend = backend;
  so.seed = o.seed;
  so.depth = DepthFor(2 * trials);
  Stack st(so);
  std::mt19937_64 rng(o.seed ^ 0xa5a5);
  const Hasher h(so.hash_profile);
  auto& tally = rep.attacks["bounded-distinguisher"];
  size_t linked = 0;

  for (size_t i = 0; i < trials; ++i) {
    const Stack::User u[2] = {st.AddUser(), st.AddUser()};
    const int b = static_cast<int>(rng() & 1);
    st.Sync();
    const auto req = st.Prove(u[b], kGameKeyBytes);
    if (st.Submit(req).kind != tunnel::MessageKind::kKeyDelivery) {
      throw Error("honest anonymity redemption refused");
    }
    // The distinguisher's view: the registration audit log entries and
    // the stored redemption record, plus the pk seen on the wire.
    const auto snap = st.as().Snapshot();
    const auto& audit = snap->audit_log;
    const auto records = st.pvs().nullifiers().Records();
    const auto& rec = records.back();
    const Bytes& pk = req.pk;

    int links = 0, guess = -1;
    for (int j = 0; j < 2; ++j) {
      const auto& a = audit[audit.size() - 2 + j];
      const ByteSpan c = a.commitment.value.span();
      const bool link =
          Contains(rec.proof, c) || Contains(pk, c) ||
          rec.nullifier.value == a.commitment.value ||
          rec.nullifier.value == h.Hash(c) ||
          rec.nullifier.value == h.Hash(Concat(c, pk)) ||
          rec.nullifier.value == h.Hash(Concat(pk, c)) ||
          rec.nullifier.value == h.Hash(AsBytes(a.subject_id)) ||
          Contains(rec.proof, AsBytes(a.subject_id));
      if (link) {
        ++links;
        guess = j;
      }
    }
    if (links != 1) {
      guess = static_cast<int>(rng() & 1);
    } else {
      ++linked;
    }
    const bool correct = guess == b;
    Tally(tally, correct, correct ? "correct" : "wrong");
  }
  Finish(rep);
  rep.details = {{"depth", so.depth},
                 {"backend", std::string(zkp::BackendName(backend))},
                 {"linked_trials", linked}};
  rep.passed = trials > 0 && rep.rate >= 0.45 && rep.rate <= 0.55;
  return rep;
}

GameReport RunConfidentiality(const GameOptions& o) {
  GameReport rep;
  rep.name = "confidentiality";
  rep.criterion = "0 key recoveries";
  StackOptions so;
  so.backend = o.trial_backend;
  so.seed = o.seed;
  so.depth = DepthFor(o.trials);
  Stack st(so);
  const Hasher h(so.hash_profile);
  MockEntropySource adversary(o.seed ^ 0xc0ffee);
  auto& tally = rep.attacks["wrong-key-decap"];
  auto& scan = rep.attacks["ciphertext-scan"];
  std::optional<SecretBytes> previous_sk;

  for (size_t i = 0; i < o.trials; ++i) {
    const auto u = st.AddUser();
    st.Sync();
    const auto req = st.Prove(u, kGameKeyBytes);
    const auto reply = st.Submit(req);
    if (reply.kind != tunnel::MessageKind::kKeyDelivery) {
      throw Error("honest confidentiality redemption refused");
    }
    const EncapsulatedKey enc{reply.payload};
    const SecretBytes key = KemDecap(enc, u.note.sk);

    // Candidate secret keys built without sk.
    std::vector<SecretBytes> guesses;
    guesses.push_back(KemKeygen(so.kem, so.lambda, adversary).sk);
    if (previous_sk) guesses.push_back(*previous_sk);
    const uint8_t alg = req.pk.empty() ? 0 : req.pk[0];
    const size_t raw = req.pk.size() > 1 ? req.pk.size() - 1 : 0;
    for (const Digest& d :
         {u.commitment.value, req.statement.nullifier.value, h.Hash(req.pk),
          h.Hash(req.proof)}) {
      Bytes g{alg};
      for (size_t k = 0; k < raw; ++k) g.push_back(d.bytes[k % Digest::kSize]);
      guesses.emplace_back(std::move(g));
    }
    guesses.emplace_back(Bytes(req.pk));

    bool recovered = false;
    for (const auto& g : guesses) {
      try {
        if (KemDecap(enc, g) == key) recovered = true;
      } catch (const Error&) {
      }
    }
    Tally(tally, recovered, recovered ? "recovered" : "refused");
    const bool leaked = Contains(enc.ciphertext, key.span());
    Tally(scan, leaked, leaked ? "plaintext-found" : "clean");
    previous_sk = u.note.sk;
  }
  Finish(rep);
  rep.details = {{"depth", so.depth},
                 {"backend", std::string(zkp::BackendName(so.backend))},
                 {"key_bytes", kGameKeyBytes}};
  rep.passed = rep.successes == 0;
  return rep;
}

GameReport RunStoreCrossScan(const GameOptions& o) {
  GameReport rep;
  rep.name = "store-cross-scan";
  rep.criterion = "no shared field other than roots";
  StackOptions so;
  so.backend = o.backend;
  so.seed = o.seed;
  so.depth = DepthFor(o.scan_users);
  Stack st(so);

  std::vector<Stack::User> users;
  for (size_t i = 0; i < o.scan_users; ++i) users.push_back(st.AddUser());
  st.Sync();
  for (const auto& u : users) {
    if (!st.Redeem(st.Prove(u, kGameKeyBytes)).delivered()) {
      throw Error("honest cross-scan redemption refused");
    }
  }

  // Registration side.
  const auth::DataDir dir{st.dir()};
  const auto reg = auth::LoadRegistry(dir);
  std::set<Digest> roots(reg.old_roots.begin(), reg.old_roots.end());
  roots.insert(reg.tree.Root());
  std::set<Digest> commitments(reg.tree.leaves().begin(),
                               reg.tree.leaves().end());
  std::set<std::string> subjects;
  std::set<int64_t> audit_times;
  for (const auto& a : reg.audit_log) {
    commitments.insert(a.commitment.value);
    subjects.insert(a.subject_id);
    audit_times.insert(a.timestamp_ms);
  }

  // Validation side, as persisted.
  const auto records =
      pvs::ReadNullifierRecords(dir.nullifier_log(), dir.nullifier_snapshot());
  Bytes files;
  for (const auto& p : {dir.nullifier_log(), dir.nullifier_snapshot()}) {
    if (std::filesystem::exists(p)) Append(files, ReadFileBytes(p));
  }

  size_t shared_roots = 0;
  size_t timestamp_coincidences = 0;
  auto& fields = rep.attacks["field-equality"];
  auto& bytes = rep.attacks["byte-scan"];
  for (const auto& r : records) {
    const bool n_hit = commitments.count(r.nullifier.value) ||
                       roots.count(r.nullifier.value) ||
                       subjects.count(std::string(r.nullifier.value.bytes.begin(),
                                                  r.nullifier.value.bytes.end()));
    Tally(fields, n_hit, n_hit ? "nullifier-shared" : "distinct");
    const bool root_hit = commitments.count(r.root) != 0;
    Tally(fields, root_hit, root_hit ? "root-is-commitment" : "distinct");
    shared_roots += roots.count(r.root);
    bool proof_hit = false;
    for (const auto& c : commitments) proof_hit |= Contains(r.proof, c.span());
    Tally(fields, proof_hit, proof_hit ? "proof-contains-commitment"
                                       : "distinct");
    // Millisecond clocks collide when both servers are busy; a collision is
    // reported but carries no user data, so it is not a link.
    timestamp_coincidences += audit_times.count(r.timestamp_ms);
  }
  for (const auto& c : commitments) {
    const bool hit = Contains(files, c.span());
    Tally(bytes, hit, hit ? "commitment-in-store" : "absent");
  }
  for (const auto& s : subjects) {
    const bool hit = Contains(files, AsBytes(s));
    Tally(bytes, hit, hit ? "subject-in-store" : "absent");
  }
  Finish(rep);
  rep.details = {{"depth", so.depth},
                 {"backend", std::string(zkp::BackendName(so.backend))},
                 {"records", records.size()},
                 {"audit_records", reg.audit_log.size()},
                 {"records_with_known_root", shared_roots},
                 {"timestamp_coincidences", timestamp_coincidences}};
  rep.passed = rep.successes == 0 && records.size() == o.scan_users;
  return rep;
}

std::vector<GameReport> RunAllGames(const GameOptions& o) {
  std::vector<GameReport> out;
  out.push_back(RunUnforgeability(o));
  out.push_back(RunAnonymity(o));
  if (o.backend_trials > 0 && o.backend != o.trial_backend) {
    out.push_back(RunAnonymity(o, o.backend, o.backend_trials));
    out.back().name = "anonymity-" + std::string(zkp::BackendName(o.backend));
    // Too few trials for the rate band; only links matter here.
    out.back().criterion = "no linked trials";
    out.back().passed = out.back().details["linked_trials"] == 0;
  }
  out.push_back(RunConfidentiality(o));
  out.push_back(RunStoreCrossScan(o));
  for (const auto& r : out) {
    spdlog::info("game {}: {}/{} adversary wins, {}", r.name, r.successes,
                 r.trials, r.passed ? "pass" : "FAIL");
  }
  return out;
}

}  // namespace anonkey::bench
