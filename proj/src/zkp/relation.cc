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

#include "anonkey/zkp/relation.h"

#include "anonkey/core/encoding.h"
#include "anonkey/core/tlv.h"
#include "anonkey/zkp/gadgets.h"
#include "anonkey/zkp/sha256_gadget.h"

namespace anonkey::zkp {
namespace {

constexpr uint8_t kStatementVersion = 1;
constexpr uint8_t kTagNullifier = 1;
constexpr uint8_t kTagRoot = 2;

using gadgets::Bits;

// A digest inside the circuit. Algebraic digests are one field element;
// SHA-256 digests are 256 bits.
using DigestWire = std::vector<LinearCombination>;

Bytes LengthPrefix(size_t n) {
  Bytes out;
  AppendU32BE(out, static_cast<uint32_t>(n));
  return out;
}

class CircuitHasher {
 public:
  CircuitHasher(ConstraintSystem& cs, HashProfile profile)
      : cs_(cs), profile_(profile) {}

  size_t limbs() const { return profile_ == HashProfile::kAlgebraic ? 1 : 256; }

  DigestWire Hash(const Bits& bits, Clause clause) {
    if (profile_ == HashProfile::kAlgebraic) {
      return {gadgets::PoseidonHashBits(cs_, bits, clause)};
    }
    return Sha256Gadget(cs_, bits, clause);
  }

  DigestWire Node(const DigestWire& l, const DigestWire& r, Clause clause) {
    if (profile_ == HashProfile::kAlgebraic) {
      return {gadgets::PoseidonHashNode(cs_, l[0], r[0], clause)};
    }
    return Sha256Gadget(cs_, gadgets::Concat(l, r), clause);
  }

  // Allocates a private digest; SHA-256 digests are range checked bitwise.
  DigestWire Alloc(const Digest& value, Clause clause) {
    if (profile_ == HashProfile::kAlgebraic) {
      Fr v;
      if (cs_.with_values()) {
        auto x = Fr::FromBytesBE(value.bytes);
        if (!x) throw UnsatisfiedError(clause, "non-canonical digest");
        v = *x;
      }
      return {LinearCombination(cs_.AllocPrivate(v))};
    }
    return gadgets::AllocBytes(cs_, value.bytes, Digest::kSize, clause);
  }

  // Packs a digest into the limbs used for public inputs.
  std::vector<LinearCombination> Pack(const DigestWire& d) {
    if (profile_ == HashProfile::kAlgebraic) return d;
    std::span<const LinearCombination> bits(d);
    return {gadgets::PackBits(bits.first(128)),
            gadgets::PackBits(bits.subspan(128))};
  }

  void EnforceEqual(const DigestWire& a, const DigestWire& b, Clause clause) {
    auto pa = Pack(a);
    auto pb = Pack(b);
    for (size_t i = 0; i < pa.size(); ++i) {
      cs_.EnforceEqual(pa[i], pb[i], clause);
    }
  }

 private:
  ConstraintSystem& cs_;
  HashProfile profile_;
};

}  // namespace

void RelationConfig::Validate() const {
  if (depth < merkle::kMinDepth || depth > merkle::kMaxDepth) {
    throw ConfigError("depth must be in [1, 32]");
  }
  if (!IsSupportedLambda(lambda)) {
    throw ConfigError("lambda must be 128, 192 or 256");
  }
  if (kem_profile == KemProfile::kRsaOaep && lambda != 128) {
    throw ConfigError("rsa-oaep profile requires lambda 128");
  }
}

Bytes RelationConfig::Serialize() const {
  Bytes out;
  out.push_back(static_cast<uint8_t>(hash_profile));
  out.push_back(static_cast<uint8_t>(depth));
  AppendU16BE(out, static_cast<uint16_t>(lambda));
  out.push_back(static_cast<uint8_t>(kem_profile));
  return out;
}

RelationConfig RelationConfig::Parse(ByteReader& r) {
  RelationConfig c;
  c.hash_profile = HashProfileFromByte(r.U8());
  c.depth = r.U8();
  c.lambda = r.U16BE();
  const uint8_t kem = r.U8();
  if (kem != static_cast<uint8_t>(KemProfile::kDhkem) &&
      kem != static_cast<uint8_t>(KemProfile::kRsaOaep)) {
    throw ParseError("unknown kem profile byte");
  }
  c.kem_profile = static_cast<KemProfile>(kem);
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  return c;
}

std::string RelationConfig::ToString() const {
  return std::string(HashProfileName(hash_profile)) + "/depth=" +
         std::to_string(depth) + "/lambda=" + std::to_string(lambda) + "/" +
         std::string(KemProfileName(kem_profile));
}

Digest CircuitFingerprint(const RelationConfig& config) {
  const std::string_view label = "anonkey/relation";
  Bytes in(label.begin(), label.end());
  in.push_back(kRelationVersion);
  Append(in, config.Serialize());
  return Sha256(in);
}

size_t RhoBytes(const RelationConfig& config) { return config.lambda / 8; }

size_t PublicKeyBytes(const RelationConfig& config) {
  if (config.kem_profile != KemProfile::kDhkem) {
    throw UnsupportedError("rsa-oaep keys have no fixed circuit encoding");
  }
  return config.lambda == 128 ? 33 : 57;
}

size_t SecretKeyBytes(const RelationConfig& config) {
  return PublicKeyBytes(config);
}

Bytes Statement::Serialize() const {
  return TlvWriter(kStatementVersion)
      .Add(kTagNullifier, nullifier.value.span())
      .Add(kTagRoot, root.span())
      .Finish();
}

Statement Statement::Parse(ByteSpan data) {
  TlvRecord rec = TlvRecord::Parse(data, kStatementVersion);
  Statement x;
  x.nullifier.value =
      Digest::FromSpan(rec.GetFixed(kTagNullifier, Digest::kSize));
  x.root = Digest::FromSpan(rec.GetFixed(kTagRoot, Digest::kSize));
  if (rec.size() != 2) throw ParseError("unexpected statement fields");
  return x;
}

std::pair<Statement, Witness> MakeStatementAndWitness(
    const Note& note, const merkle::MerkleTree& tree) {
  Witness w;
  w.rho = note.rho;
  w.pk = note.pk;
  w.sk = note.sk;
  w.commitment = DeriveCommitment(note, tree.hasher());
  w.leaf_index = tree.IndexOf(w.commitment.value);
  w.validation = tree.Validation(w.leaf_index);
  Statement x;
  x.nullifier = DeriveNullifier(note, tree.hasher());
  x.root = tree.Root();
  return {std::move(x), std::move(w)};
}

std::optional<std::vector<Fr>> PublicInputs(const RelationConfig& config,
                                            const Statement& x) {
  std::vector<Fr> out;
  for (const Digest* d : {&x.nullifier.value, &x.root}) {
    if (config.hash_profile == HashProfile::kAlgebraic) {
      auto v = Fr::FromBytesBE(d->bytes);
      if (!v) return std::nullopt;
      out.push_back(*v);
    } else {
      out.push_back(Fr::FromBytesReduced(d->span().first(16)));
      out.push_back(Fr::FromBytesReduced(d->span().subspan(16)));
    }
  }
  return out;
}

std::optional<Clause> CheckRelation(const RelationConfig& config,
                                    const Statement& x, const Witness& w) {
  const Hasher h(config.hash_profile);
  if (w.rho.size() != RhoBytes(config) ||
      w.validation.depth() != config.depth ||
      (w.leaf_index >> config.depth) != 0) {
    return Clause::kWellFormed;
  }
  if (config.kem_profile == KemProfile::kDhkem &&
      (w.pk.size() != PublicKeyBytes(config) ||
       w.sk.size() != SecretKeyBytes(config))) {
    return Clause::kWellFormed;
  }
  Bytes c_pre = EncodePair(w.sk.span(), w.rho);
  const bool c_ok = h.Hash(c_pre) == w.commitment.value;
  SecureZero(c_pre);
  if (!c_ok) return Clause::kCommitment;
  if (h.Hash(EncodePair(w.pk, w.rho)) != x.nullifier.value) {
    return Clause::kNullifier;
  }
  if (!merkle::IsLeafOfTree(h, w.commitment.value, w.leaf_index, w.validation,
                            x.root)) {
    return Clause::kMembership;
  }
  return std::nullopt;
}

bool CircuitSupports(const RelationConfig& config, std::string* reason) {
  try {
    config.Validate();
  } catch (const ConfigError& e) {
    if (reason) *reason = e.what();
    return false;
  }
  if (config.kem_profile != KemProfile::kDhkem) {
    if (reason) *reason = "the circuit only encodes dhkem keys";
    return false;
  }
  if (config.hash_profile == HashProfile::kSha256 &&
      config.depth > kMaxSha256CircuitDepth) {
    if (reason) {
      *reason = "sha256 circuit supports depth <= " +
                std::to_string(kMaxSha256CircuitDepth);
    }
    return false;
  }
  return true;
}

ConstraintSystem BuildCircuit(const RelationConfig& config, const Statement* x,
                              const Witness* w) {
  std::string reason;
  if (!CircuitSupports(config, &reason)) throw UnsupportedError(reason);
  const bool with_values = x != nullptr && w != nullptr;
  ConstraintSystem cs(with_values);
  CircuitHasher hasher(cs, config.hash_profile);

  if (with_values && (w->validation.depth() != config.depth ||
                      (w->leaf_index >> config.depth) != 0 ||
                      w->rho.size() != RhoBytes(config) ||
                      w->pk.size() != PublicKeyBytes(config) ||
                      w->sk.size() != SecretKeyBytes(config))) {
    throw UnsatisfiedError(Clause::kWellFormed,
                           "witness shape does not match the relation");
  }

  // Public inputs first: N then root.
  std::vector<Fr> inputs;
  if (with_values) {
    auto in = PublicInputs(config, *x);
    if (!in) {
      throw UnsatisfiedError(Clause::kWellFormed,
                             "statement digest is not a field element");
    }
    inputs = std::move(*in);
  } else {
    inputs.resize(config.hash_profile == HashProfile::kAlgebraic ? 2 : 4);
  }
  std::vector<LinearCombination> pub;
  for (const Fr& v : inputs) pub.emplace_back(cs.AllocPublic(v));
  const size_t half = pub.size() / 2;
  std::vector<LinearCombination> nullifier_pub(pub.begin(),
                                               pub.begin() + half);
  std::vector<LinearCombination> root_pub(pub.begin() + half, pub.end());

  const size_t rho_len = RhoBytes(config);
  const size_t pk_len = PublicKeyBytes(config);
  const size_t sk_len = SecretKeyBytes(config);
  const ByteSpan none;
  Bits rho = gadgets::AllocBytes(cs, with_values ? ByteSpan(w->rho) : none,
                                 rho_len, Clause::kWellFormed);
  Bits pk = gadgets::AllocBytes(cs, with_values ? ByteSpan(w->pk) : none,
                                pk_len, Clause::kWellFormed);
  Bits sk = gadgets::AllocBytes(cs, with_values ? w->sk.span() : none, sk_len,
                                Clause::kWellFormed);
  Bits rho_enc = gadgets::Concat(gadgets::ConstantBytes(LengthPrefix(rho_len)),
                                 rho);

  // C = H(encode(sk) || encode(rho)), tied to the committed leaf.
  DigestWire commitment = hasher.Alloc(
      with_values ? w->commitment.value : Digest{}, Clause::kWellFormed);
  DigestWire c_calc = hasher.Hash(
      gadgets::Concat(
          gadgets::Concat(gadgets::ConstantBytes(LengthPrefix(sk_len)), sk),
          rho_enc),
      Clause::kInternal);
  hasher.EnforceEqual(c_calc, commitment, Clause::kCommitment);

  // N = H(encode(pk) || encode(rho)).
  DigestWire n_calc = hasher.Hash(
      gadgets::Concat(
          gadgets::Concat(gadgets::ConstantBytes(LengthPrefix(pk_len)), pk),
          rho_enc),
      Clause::kInternal);
  auto n_packed = hasher.Pack(n_calc);
  for (size_t i = 0; i < n_packed.size(); ++i) {
    cs.EnforceEqual(n_packed[i], nullifier_pub[i], Clause::kNullifier);
  }

  // Membership: fold the leaf up with the index bits, low bit first.
  DigestWire cur = commitment;
  for (unsigned level = 0; level < config.depth; ++level) {
    const uint64_t bit_value =
        with_values ? (w->leaf_index >> level) & 1 : 0;
    const Var bit = cs.AllocPrivate(Fr::FromU64(bit_value));
    cs.EnforceBoolean(bit, Clause::kMembership);
    DigestWire sibling = hasher.Alloc(
        with_values ? w->validation.siblings[level] : Digest{},
        Clause::kMembership);
    DigestWire left(cur.size()), right(cur.size());
    for (size_t k = 0; k < cur.size(); ++k) {
      auto [l, r] = gadgets::CondSwap(cs, LinearCombination(bit), cur[k],
                                      sibling[k], Clause::kMembership);
      left[k] = std::move(l);
      right[k] = std::move(r);
    }
    cur = hasher.Node(left, right, Clause::kInternal);
  }
  auto root_packed = hasher.Pack(cur);
  for (size_t i = 0; i < root_packed.size(); ++i) {
    cs.EnforceEqual(root_packed[i], root_pub[i], Clause::kMembership);
  }
  return cs;
}

}  // namespace anonkey::zkp
