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

#ifndef ANONKEY_ZKP_RELATION_H_
#define ANONKEY_ZKP_RELATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/kem.h"
#include "anonkey/core/note.h"
#include "anonkey/merkle/merkle_tree.h"
#include "anonkey/zkp/r1cs.h"

// The redemption relation: a witness (rho, pk, sk, C, i, val) is valid for
// the statement (N, root) iff
//   C = H(encode(sk) || encode(rho)),
//   N = H(encode(pk) || encode(rho)),
//   and C sits at leaf i of the tree with root `root` under `val`.
namespace anonkey::zkp {

inline constexpr uint8_t kRelationVersion = 1;

struct RelationConfig {
  HashProfile hash_profile = HashProfile::kAlgebraic;
  unsigned depth = 8;
  unsigned lambda = 256;
  KemProfile kem_profile = KemProfile::kDhkem;

  // Throws ConfigError for out-of-range values.
  void Validate() const;
  Bytes Serialize() const;
  static RelationConfig Parse(ByteReader& r);
  std::string ToString() const;
  friend bool operator==(const RelationConfig&, const RelationConfig&) =
      default;
};

// Digest over (relation version, hash profile, depth, lambda, kem profile).
Digest CircuitFingerprint(const RelationConfig& config);

// Byte lengths of the witness encodings fixed by the configuration. Throws
// UnsupportedError when the KEM keys have no fixed length.
size_t RhoBytes(const RelationConfig& config);
size_t PublicKeyBytes(const RelationConfig& config);
size_t SecretKeyBytes(const RelationConfig& config);

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Witness rejected before or during proving; names the violated clause.
class UnsatisfiedError : public Error {
 public:
  UnsatisfiedError(Clause clause, const std::string& what)
      : Error(what), clause_(clause) {}
  Clause clause() const { return clause_; }

 private:
  Clause clause_;
};

struct Statement {
  Nullifier nullifier;
  Digest root;

  // version || TLV(nullifier, root).
  Bytes Serialize() const;
  static Statement Parse(ByteSpan data);
  friend bool operator==(const Statement&, const Statement&) = default;
};

struct Witness {
  Bytes rho;
  Bytes pk;
  SecretBytes sk;
  Commitment commitment;
  uint64_t leaf_index = 0;
  merkle::ValidationList validation;
};

// Assembles the statement and witness for `note` against the current state
// of `tree`. Throws AbsentLeafError if the note's commitment is not a leaf.
std::pair<Statement, Witness> MakeStatementAndWitness(
    const Note& note, const merkle::MerkleTree& tree);

// Field encoding of the statement: algebraic digests are one element each;
// SHA-256 digests are split into two 128-bit halves. Returns nullopt when a
// digest is not a canonical field element.
std::optional<std::vector<Fr>> PublicInputs(const RelationConfig& config,
                                            const Statement& x);

// Native evaluation of the relation; returns the first failing clause.
std::optional<Clause> CheckRelation(const RelationConfig& config,
                                    const Statement& x, const Witness& w);

// Builds the arithmetic circuit. With (x, w) the assignment is filled in;
// without, only the shape is produced (for setup). Throws UnsupportedError
// for configurations the circuit does not cover.
ConstraintSystem BuildCircuit(const RelationConfig& config,
                              const Statement* x = nullptr,
                              const Witness* w = nullptr);

// Whether BuildCircuit supports `config`.
bool CircuitSupports(const RelationConfig& config, std::string* reason);

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_RELATION_H_
