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
#include <filesystem>
#include <random>
#include <set>
#include <vector>

#include "anonkey/core/entropy.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/note.h"
#include "anonkey/merkle/merkle_tree.h"
#include "anonkey/zkp/proving_system.h"
#include "anonkey/zkp/relation.h"
#include "anonkey/zkp/sha256_gadget.h"
#include "gtest/gtest.h"

namespace anonkey::zkp {
namespace {

struct Fixture {
  RelationConfig config;
  std::vector<Note> notes;
  merkle::MerkleTree tree;
};

Fixture MakeFixture(const RelationConfig& config, size_t users,
                    uint64_t seed) {
  MockEntropySource entropy(seed);
  Fixture f{config, {}, merkle::MerkleTree(config.hash_profile, config.depth)};
  for (size_t i = 0; i < users; ++i) {
    f.notes.push_back(UserInit(config.lambda, config.kem_profile, entropy));
    f.tree.AddLeaf(DeriveCommitment(f.notes.back(), f.tree.hasher()).value);
  }
  return f;
}

RelationConfig Algebraic(unsigned depth, unsigned lambda = 256) {
  RelationConfig c;
  c.hash_profile = HashProfile::kAlgebraic;
  c.depth = depth;
  c.lambda = lambda;
  return c;
}

RelationConfig Sha(unsigned depth, unsigned lambda = 128) {
  RelationConfig c = Algebraic(depth, lambda);
  c.hash_profile = HashProfile::kSha256;
  return c;
}

std::optional<Clause> CircuitFailure(const RelationConfig& config,
                                     const Statement& x, const Witness& w) {
  ConstraintSystem cs = BuildCircuit(config, &x, &w);
  auto row = cs.FirstUnsatisfied();
  if (!row) return std::nullopt;
  return cs.constraints()[*row].clause;
}

// Tampered witnesses, each paired with the clause it breaks.
std::vector<std::pair<std::string, std::pair<Witness, Clause>>> Tampered(
    const Fixture& f, const Witness& w) {
  std::vector<std::pair<std::string, std::pair<Witness, Clause>>> out;
  {
    Witness t = w;
    t.leaf_index ^= 1;
    out.push_back({"wrong leaf index", {t, Clause::kMembership}});
  }
  {
    // N computed from a different rho: swap in another user's rho while
    // keeping the original statement.
    Witness t = w;
    t.rho = f.notes[1].rho;
    out.push_back({"other rho", {t, Clause::kCommitment}});
  }
  {
    Witness t = w;
    t.pk = f.notes[1].pk;
    out.push_back({"other pk", {t, Clause::kNullifier}});
  }
  {
    Witness t = w;
    t.sk = f.notes[1].sk;
    out.push_back({"other sk", {t, Clause::kCommitment}});
  }
  {
    Witness t = w;
    t.validation.siblings[0].bytes[31] ^= 1;
    out.push_back({"bad sibling", {t, Clause::kMembership}});
  }
  {
    Witness t = w;
    t.commitment = DeriveCommitment(f.notes[1], f.tree.hasher());
    out.push_back({"other commitment", {t, Clause::kCommitment}});
  }
  return out;
}

class RelationTest : public ::testing::TestWithParam<RelationConfig> {};

TEST_P(RelationTest, HonestWitnessSatisfiesNativeAndCircuit) {
  const Fixture f = MakeFixture(GetParam(), 3, 1);
  for (const Note& note : f.notes) {
    auto [x, w] = MakeStatementAndWitness(note, f.tree);
    EXPECT_FALSE(CheckRelation(f.config, x, w).has_value());
    EXPECT_FALSE(CircuitFailure(f.config, x, w).has_value());
    EXPECT_EQ(x.nullifier, DeriveNullifier(note, f.tree.hasher()));
    EXPECT_EQ(x.root, f.tree.Root());
  }
}

TEST_P(RelationTest, TamperedWitnessesFailTheRightClause) {
  const Fixture f = MakeFixture(GetParam(), 3, 2);
  auto [x, w] = MakeStatementAndWitness(f.notes[0], f.tree);
  for (const auto& [name, tw] : Tampered(f, w)) {
    const auto& [t, clause] = tw;
    EXPECT_EQ(CheckRelation(f.config, x, t), clause) << name;
    // The circuit must reject on its own, independent of the native check.
    auto circuit = CircuitFailure(f.config, x, t);
    ASSERT_TRUE(circuit.has_value()) << name;
    EXPECT_EQ(*circuit, clause) << name;
  }
}

TEST_P(RelationTest, TamperedStatementFailsCircuit) {
  const Fixture f = MakeFixture(GetParam(), 3, 3);
  auto [x, w] = MakeStatementAndWitness(f.notes[0], f.tree);
  Statement other_n = x;
  other_n.nullifier = DeriveNullifier(f.notes[1], f.tree.hasher());
  EXPECT_EQ(CircuitFailure(f.config, other_n, w), Clause::kNullifier);
  Statement other_root = x;
  merkle::MerkleTree bigger = f.tree;
  bigger.AddLeaf(f.tree.hasher().Hash(Bytes{9}));
  other_root.root = bigger.Root();
  EXPECT_EQ(CircuitFailure(f.config, other_root, w), Clause::kMembership);
}

TEST_P(RelationTest, ShapeIsIndependentOfWitness) {
  const Fixture f = MakeFixture(GetParam(), 4, 4);
  const Digest shape = BuildCircuit(f.config).ShapeDigest();
  for (const Note& note : f.notes) {
    auto [x, w] = MakeStatementAndWitness(note, f.tree);
    EXPECT_EQ(BuildCircuit(f.config, &x, &w).ShapeDigest(), shape);
  }
}

INSTANTIATE_TEST_SUITE_P(
    Configs, RelationTest,
    ::testing::Values(Algebraic(2), Algebraic(4), Algebraic(4, 128),
                      Algebraic(3, 192), Sha(2), Sha(3, 256)),
    [](const auto& info) {
      return std::string(HashProfileName(info.param.hash_profile)) + "_d" +
             std::to_string(info.param.depth) + "_l" +
             std::to_string(info.param.lambda);
    });

TEST(RelationConfigTest, SerializeAndFingerprint) {
  const RelationConfig a = Algebraic(8);
  Bytes b = a.Serialize();
  ByteReader r(b);
  EXPECT_EQ(RelationConfig::Parse(r), a);
  std::set<Digest> seen;
  for (unsigned depth : {4, 8, 16}) {
    for (unsigned lambda : {128, 192, 256}) {
      seen.insert(CircuitFingerprint(Algebraic(depth, lambda)));
      seen.insert(CircuitFingerprint(Sha(depth, lambda)));
    }
  }
  EXPECT_EQ(seen.size(), 18u);
}

TEST(RelationConfigTest, UnsupportedCombinations) {
  std::string reason;
  EXPECT_FALSE(CircuitSupports(Sha(kMaxSha256CircuitDepth + 1), &reason));
  EXPECT_FALSE(reason.empty());
  RelationConfig rsa = Algebraic(4, 128);
  rsa.kem_profile = KemProfile::kRsaOaep;
  EXPECT_FALSE(CircuitSupports(rsa, nullptr));
  EXPECT_THROW(zkp::Setup(BackendKind::kGroth16, rsa), UnsupportedError);
  EXPECT_NO_THROW(zkp::Setup(BackendKind::kMock, rsa, {.test_seed = 1}));
}

TEST(StatementTest, RoundTrip) {
  const Fixture f = MakeFixture(Algebraic(3), 2, 5);
  auto [x, w] = MakeStatementAndWitness(f.notes[1], f.tree);
  EXPECT_EQ(Statement::Parse(x.Serialize()), x);
  Bytes bad = x.Serialize();
  bad.pop_back();
  EXPECT_THROW(Statement::Parse(bad), ParseError);
}

TEST(CircuitSizeTest, ConstraintCountAffineInDepth) {
  for (const auto& make : {+[](unsigned d) { return Algebraic(d); },
                           +[](unsigned d) { return Sha(d); }}) {
    std::vector<size_t> counts;
    const std::vector<unsigned> depths =
        make(1).hash_profile == HashProfile::kSha256
            ? std::vector<unsigned>{2, 4, 6, 8}
            : std::vector<unsigned>{4, 8, 12, 16};
    for (unsigned d : depths) {
      counts.push_back(MeasureCircuit(make(d)).num_constraints);
    }
    const size_t step = counts[1] - counts[0];
    EXPECT_GT(step, 0u);
    for (size_t i = 1; i < counts.size(); ++i) {
      EXPECT_EQ(counts[i] - counts[i - 1], step);
    }
  }
}

Crs SeededCrs(const RelationConfig& config, uint64_t seed,
              BackendKind backend = BackendKind::kGroth16) {
  return Setup(backend, config, {.test_seed = seed});
}

class ProvingTest : public ::testing::TestWithParam<BackendKind> {};

TEST_P(ProvingTest, CompletenessAndTamperRejection) {
  const RelationConfig config = Algebraic(4);
  const Fixture f = MakeFixture(config, 3, 6);
  const Crs crs = SeededCrs(config, 7, GetParam());
  const Prover prover = Prover::Load(crs.proving_key);
  const Verifier verifier = Verifier::Load(crs.verification_key);
  EXPECT_EQ(prover.info().fingerprint, CircuitFingerprint(config));

  auto [x, w] = MakeStatementAndWitness(f.notes[2], f.tree);
  const Bytes proof = prover.Prove(x, w);
  EXPECT_EQ(proof.size(), prover.proof_size());
  auto result = verifier.Verify(x, proof);
  EXPECT_TRUE(result.accepted) << result.diagnostic;

  // 64 sampled bit positions across the whole proof.
  std::mt19937_64 rng(8);
  for (int i = 0; i < 64; ++i) {
    Bytes bad = proof;
    const size_t bit = rng() % (bad.size() * 8);
    bad[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
    auto r = verifier.Verify(x, bad);
    EXPECT_FALSE(r.accepted) << "bit " << bit;
    EXPECT_FALSE(r.diagnostic.empty());
  }

  Statement tampered = x;
  tampered.nullifier = DeriveNullifier(f.notes[0], f.tree.hasher());
  EXPECT_FALSE(verifier.Verify(tampered, proof).accepted);
  tampered = x;
  tampered.root.bytes[31] ^= 1;
  EXPECT_FALSE(verifier.Verify(tampered, proof).accepted);

  // Malformed lengths are rejected without throwing.
  EXPECT_FALSE(verifier.Verify(x, Bytes{}).accepted);
  Bytes longer = proof;
  longer.push_back(0);
  EXPECT_FALSE(verifier.Verify(x, longer).accepted);
}

TEST_P(ProvingTest, BadWitnessFailsAtProveTime) {
  const RelationConfig config = Algebraic(4);
  const Fixture f = MakeFixture(config, 3, 9);
  const Prover prover = Prover::Load(SeededCrs(config, 10, GetParam()).proving_key);
  auto [x, w] = MakeStatementAndWitness(f.notes[0], f.tree);
  for (const auto& [name, tw] : Tampered(f, w)) {
    try {
      prover.Prove(x, tw.first);
      ADD_FAILURE() << name << " produced a proof";
    } catch (const UnsatisfiedError& e) {
      EXPECT_EQ(e.clause(), tw.second) << name;
    }
  }
}

TEST_P(ProvingTest, CrossSetupRejected) {
  const RelationConfig config = Algebraic(4);
  const Fixture f = MakeFixture(config, 2, 11);
  const Crs a = SeededCrs(config, 12, GetParam());
  const Crs b = SeededCrs(config, 13, GetParam());
  auto [x, w] = MakeStatementAndWitness(f.notes[0], f.tree);
  const Bytes proof = Prover::Load(a.proving_key).Prove(x, w);
  EXPECT_TRUE(Verifier::Load(a.verification_key).Verify(x, proof).accepted);
  EXPECT_FALSE(Verifier::Load(b.verification_key).Verify(x, proof).accepted);

  // A different configuration yields a fingerprint diagnostic.
  const Crs other = SeededCrs(Algebraic(5), 12, GetParam());
  auto r = Verifier::Load(other.verification_key).Verify(x, proof);
  EXPECT_FALSE(r.accepted);
  EXPECT_NE(r.diagnostic.find("fingerprint"), std::string::npos);
}

INSTANTIATE_TEST_SUITE_P(Backends, ProvingTest,
                         ::testing::Values(BackendKind::kGroth16,
                                           BackendKind::kMock),
                         [](const auto& info) {
                           return std::string(BackendName(info.param));
                         });

TEST(Groth16ProvingTest, CompletenessOverRandomTrees) {
  std::mt19937_64 rng(14);
  for (unsigned depth : {3, 5, 8}) {
    const RelationConfig config = Algebraic(depth, depth == 5 ? 128 : 256);
    const size_t users = 1 + rng() % 32;
    const Fixture f = MakeFixture(config, std::min<size_t>(users, 1u << depth),
                                  rng());
    const Crs crs = SeededCrs(config, rng());
    const Prover prover = Prover::Load(crs.proving_key);
    const Verifier verifier = Verifier::Load(crs.verification_key);
    for (int k = 0; k < 3; ++k) {
      const Note& note = f.notes[rng() % f.notes.size()];
      auto [x, w] = MakeStatementAndWitness(note, f.tree);
      auto r = verifier.Verify(x, prover.Prove(x, w));
      EXPECT_TRUE(r.accepted) << "depth " << depth << ": " << r.diagnostic;
    }
  }
}

TEST(Groth16ProvingTest, Sha256ProfileRoundTrip) {
  const RelationConfig config = Sha(1);
  const Fixture f = MakeFixture(config, 2, 15);
  const Crs crs = SeededCrs(config, 16);
  auto [x, w] = MakeStatementAndWitness(f.notes[1], f.tree);
  const Bytes proof = Prover::Load(crs.proving_key).Prove(x, w);
  const Verifier verifier = Verifier::Load(crs.verification_key);
  EXPECT_TRUE(verifier.Verify(x, proof).accepted);
  Statement t = x;
  t.nullifier.value.bytes[0] ^= 0x80;
  EXPECT_FALSE(verifier.Verify(t, proof).accepted);
}

TEST(Groth16ProvingTest, SeededSetupIsDeterministic) {
  const RelationConfig config = Algebraic(2);
  const Crs a = SeededCrs(config, 42);
  const Crs b = SeededCrs(config, 42);
  const Crs c = SeededCrs(config, 43);
  EXPECT_EQ(a.verification_key, b.verification_key);
  EXPECT_EQ(a.proving_key, b.proving_key);
  EXPECT_NE(a.verification_key, c.verification_key);
  const Crs prod = zkp::Setup(BackendKind::kGroth16, config);
  EXPECT_NE(prod.verification_key, a.verification_key);
}

TEST(Groth16ProvingTest, ProofSizeConstantAcrossDepths) {
  std::set<size_t> sizes;
  for (unsigned depth : {4, 8, 16}) {
    const RelationConfig config = Algebraic(depth);
    const Fixture f = MakeFixture(config, 2, depth);
    const Crs crs = SeededCrs(config, depth);
    auto [x, w] = MakeStatementAndWitness(f.notes[0], f.tree);
    const Bytes proof = Prover::Load(crs.proving_key).Prove(x, w);
    sizes.insert(proof.size());
    EXPECT_TRUE(Verifier::Load(crs.verification_key).Verify(x, proof).accepted);
  }
  EXPECT_EQ(sizes.size(), 1u);
}

TEST(CrsTest, SaveLoadAndFingerprintChecks) {
  const RelationConfig config = Algebraic(3);
  const Crs crs = SeededCrs(config, 17);
  const auto dir =
      std::filesystem::temp_directory_path() / "anonkey_crs_test";
  std::filesystem::remove_all(dir);
  crs.Save(dir);
  const Crs loaded = Crs::Load(dir);
  EXPECT_EQ(loaded.proving_key, crs.proving_key);
  EXPECT_EQ(loaded.verification_key, crs.verification_key);
  EXPECT_EQ(loaded.fingerprint, CircuitFingerprint(config));

  const KeyInfo info = InspectKey(crs.verification_key);
  EXPECT_EQ(info.backend, BackendKind::kGroth16);
  EXPECT_EQ(info.config, config);

  // Swapping in a verification key from another configuration is caught.
  const Crs other = SeededCrs(Algebraic(4), 17);
  other.Save(dir / "other");
  std::filesystem::copy_file(dir / "other" / kVerificationKeyFile,
                             dir / kVerificationKeyFile,
                             std::filesystem::copy_options::overwrite_existing);
  EXPECT_THROW(Crs::Load(dir), FingerprintMismatchError);
  std::filesystem::remove_all(dir);

  Bytes truncated = crs.verification_key;
  truncated.resize(truncated.size() - 10);
  EXPECT_THROW(Verifier::Load(truncated), ParseError);
  Bytes bad_magic = crs.proving_key;
  bad_magic[0] ^= 1;
  EXPECT_THROW(Prover::Load(bad_magic), ParseError);
  EXPECT_THROW(Prover::Load(crs.verification_key), ParseError);
}

}  // namespace
}  // namespace anonkey::zkp
