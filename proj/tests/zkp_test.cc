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

#include <random>
#include <set>
#include <vector>

#include "anonkey/core/errors.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/poseidon.h"
#include "anonkey/zkp/curve.h"
#include "anonkey/zkp/domain.h"
#include "anonkey/zkp/gadgets.h"
#include "anonkey/zkp/groth16.h"
#include "anonkey/zkp/r1cs.h"
#include "anonkey/zkp/sha256_gadget.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace anonkey::zkp {
namespace {

mpz_class ToMpz(const Fr& x) {
  auto b = x.ToBytesBE();
  return oracle::FromBytes(b.data(), b.size());
}

Fr FromMpz(const mpz_class& x) {
  auto b = oracle::ToBytes32(oracle::Reduce(x));
  return *Fr::FromBytesBE(b);
}

mpz_class PowMod(const mpz_class& b, const mpz_class& e) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(),
           oracle::Modulus().get_mpz_t());
  return out;
}

Fr RandomFr(std::mt19937_64& rng) {
  Bytes b(48);
  for (auto& x : b) x = static_cast<uint8_t>(rng());
  return Fr::FromBytesReduced(b);
}

Bytes RandomBytesFrom(std::mt19937_64& rng, size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<uint8_t>(rng());
  return b;
}

class DomainTest : public ::testing::TestWithParam<uint64_t> {};

TEST_P(DomainTest, RootHasExactOrder) {
  const uint64_t n = GetParam();
  const auto d = EvaluationDomain::ForSize(n);
  ASSERT_EQ(d.size(), n);
  const mpz_class w = ToMpz(d.omega());
  EXPECT_EQ(PowMod(w, n), 1);
  for (uint64_t p : {2, 3, 11, 19}) {
    if (n % p == 0) EXPECT_NE(PowMod(w, n / p), 1) << "p=" << p;
  }
}

TEST_P(DomainTest, FftMatchesNaiveDft) {
  const uint64_t n = GetParam();
  const auto d = EvaluationDomain::ForSize(n);
  std::mt19937_64 rng(n);
  std::vector<Fr> coeffs(n);
  for (auto& c : coeffs) c = RandomFr(rng);

  std::vector<Fr> evals = coeffs;
  d.Fft(evals);
  const mpz_class w = ToMpz(d.omega());
  for (uint64_t i = 0; i < n; ++i) {
    const mpz_class x = PowMod(w, i);
    mpz_class acc = 0;
    for (uint64_t j = n; j-- > 0;) {
      acc = oracle::Reduce(acc * x + ToMpz(coeffs[j]));
    }
    ASSERT_EQ(ToMpz(evals[i]), acc) << "i=" << i;
  }
  d.InverseFft(evals);
  EXPECT_EQ(evals, coeffs);
}

TEST_P(DomainTest, CosetRoundTripAndLagrange) {
  const uint64_t n = GetParam();
  const auto d = EvaluationDomain::ForSize(n);
  std::mt19937_64 rng(n + 1);
  std::vector<Fr> coeffs(n);
  for (auto& c : coeffs) c = RandomFr(rng);
  const Fr g = EvaluationDomain::CosetShift();

  std::vector<Fr> a = coeffs;
  d.CosetFft(a, g);
  // Spot-check one coset evaluation by Horner.
  const Fr x = g * d.omega().Pow(3 % n);
  Fr acc;
  for (size_t j = n; j-- > 0;) acc = acc * x + coeffs[j];
  EXPECT_EQ(a[3 % n], acc);
  d.CosetInverseFft(a, g);
  EXPECT_EQ(a, coeffs);

  // sum_j L_j(tau) f(omega^j) = f(tau) for deg f < n.
  const Fr tau = RandomFr(rng);
  const auto lag = d.LagrangeAt(tau);
  std::vector<Fr> evals = coeffs;
  d.Fft(evals);
  Fr interp, direct;
  for (size_t j = 0; j < n; ++j) interp += lag[j] * evals[j];
  for (size_t j = n; j-- > 0;) direct = direct * tau + coeffs[j];
  EXPECT_EQ(interp, direct);
  EXPECT_EQ(d.VanishingAt(tau), tau.Pow(n) - Fr::One());
}

INSTANTIATE_TEST_SUITE_P(Sizes, DomainTest,
                         ::testing::Values(2, 3, 8, 11, 12, 19, 33, 38, 57,
                                           64, 66, 209, 627, 1254));

TEST(DomainSizeTest, PicksSmallestSupportedSize) {
  EXPECT_EQ(EvaluationDomain::ForSize(1).size(), 2u);
  EXPECT_EQ(EvaluationDomain::ForSize(5).size(), 6u);
  EXPECT_EQ(EvaluationDomain::ForSize(13).size(), 16u);
  EXPECT_EQ(EvaluationDomain::ForSize(1025).size(), 1056u);  // 32 * 33
  EXPECT_TRUE(IsSupportedDomainSize(627));
  EXPECT_FALSE(IsSupportedDomainSize(5));
  EXPECT_FALSE(IsSupportedDomainSize(9));
}

TEST(CurveTest, PairingIsBilinear) {
  std::mt19937_64 rng(1);
  const Fr a = RandomFr(rng), b = RandomFr(rng);
  const G1 p = G1::Generator();
  const G2 q = G2::Generator();
  EXPECT_EQ(Pairing(p * a, q * b), Pairing(p * (a * b), q));
  EXPECT_EQ(Pairing(p * a, q * b), Pairing(p, q * (a * b)));
  EXPECT_EQ(GtMul(Pairing(p * a, q), Pairing(p * b, q)),
            Pairing(p * (a + b), q));
  EXPECT_FALSE(Pairing(p * a, q) == Pairing(p * b, q));
  const G1 ps[2] = {p * a, -(p * b)};
  const G2 qs[2] = {q * b, q * a};
  EXPECT_EQ(MultiPairing(ps, qs), Pairing(G1::Identity(), q));
}

TEST(CurveTest, GroupLawAndScalarMul) {
  const G1 g = G1::Generator();
  EXPECT_EQ(g + g, g * Fr::FromU64(2));
  EXPECT_TRUE((g - g).IsIdentity());
  EXPECT_TRUE((g * Fr::Zero()).IsIdentity());
  // r * G = O, expressed as (r - 1) * G + G.
  const Fr minus_one = -Fr::One();
  EXPECT_TRUE((g * minus_one + g).IsIdentity());
  const G2 h = G2::Generator();
  EXPECT_TRUE((h * minus_one + h).IsIdentity());
}

TEST(CurveTest, EncodingRoundTripsAndRejectsGarbage) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 8; ++i) {
    const G1 p = G1::Generator() * RandomFr(rng);
    const G2 q = G2::Generator() * RandomFr(rng);
    EXPECT_EQ(*G1::Decompress(p.Compress()), p);
    EXPECT_EQ(*G2::Decompress(q.Compress()), q);
    EXPECT_EQ(*G1::Deserialize(p.Serialize(), true), p);
    EXPECT_EQ(*G2::Deserialize(q.Serialize(), true), q);
  }
  EXPECT_EQ(*G1::Decompress(G1::Identity().Compress()), G1::Identity());
  Bytes junk(48, 0xff);
  EXPECT_FALSE(G1::Decompress(junk).has_value());
  EXPECT_FALSE(G1::Decompress(Bytes(47, 0)).has_value());
  EXPECT_FALSE(G2::Decompress(Bytes(95, 0)).has_value());
}

TEST(CurveTest, MultiExpMatchesNaive) {
  std::mt19937_64 rng(3);
  for (size_t n : {0, 1, 2, 5, 40, 300}) {
    std::vector<G1> pts;
    std::vector<G2> pts2;
    std::vector<Fr> ks;
    G1 expect;
    G2 expect2;
    for (size_t i = 0; i < n; ++i) {
      pts.push_back(G1::Generator() * RandomFr(rng));
      pts2.push_back(G2::Generator() * RandomFr(rng));
      Fr k = i % 7 == 0 ? Fr::Zero() : (i % 5 == 0 ? Fr::One() : RandomFr(rng));
      ks.push_back(k);
      expect += pts.back() * k;
      expect2 += pts2.back() * k;
    }
    EXPECT_EQ(MultiExp(ToAffine(pts), ks), expect) << n;
    EXPECT_EQ(MultiExp(ToAffine(pts2), ks), expect2) << n;
  }
}

TEST(CurveTest, FixedBaseMatchesPlainMul) {
  std::mt19937_64 rng(4);
  const G1 base = G1::Generator() * RandomFr(rng);
  const G1FixedBase table(base);
  const G2FixedBase table2(G2::Generator());
  std::vector<Fr> ks = {Fr::Zero(), Fr::One(), -Fr::One()};
  for (int i = 0; i < 10; ++i) ks.push_back(RandomFr(rng));
  const auto batch = table.BatchMul(ks);
  for (size_t i = 0; i < ks.size(); ++i) {
    EXPECT_EQ(table.Mul(ks[i]), base * ks[i]);
    EXPECT_EQ(G1(batch[i]), base * ks[i]);
    EXPECT_EQ(table2.Mul(ks[i]), G2::Generator() * ks[i]);
  }
}

TEST(R1csTest, DetectsViolationAndShapeIgnoresValues) {
  auto build = [](bool with_values, uint64_t x, uint64_t y) {
    ConstraintSystem cs(with_values);
    Var out = cs.AllocPublic(Fr::FromU64(y));
    Var v = cs.AllocPrivate(Fr::FromU64(x));
    Var sq = cs.AllocPrivate(Fr::FromU64(x * x));
    cs.Enforce(v, v, sq, Clause::kInternal);
    cs.Enforce(sq, v, out, Clause::kCommitment);
    return cs;
  };
  EXPECT_FALSE(build(true, 3, 27).FirstUnsatisfied().has_value());
  auto bad = build(true, 3, 28);
  ASSERT_TRUE(bad.FirstUnsatisfied().has_value());
  EXPECT_EQ(bad.constraints()[*bad.FirstUnsatisfied()].clause,
            Clause::kCommitment);
  EXPECT_EQ(build(true, 3, 27).ShapeDigest(), build(false, 0, 0).ShapeDigest());
}

// Bridge: the in-circuit hashes agree with the native ones.
TEST(GadgetBridgeTest, PoseidonBytesMatchesNative) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const size_t len = i == 0 ? 0 : rng() % 130;
    const Bytes msg = RandomBytesFrom(rng, len);
    ConstraintSystem cs(true);
    auto bits = gadgets::AllocBytes(cs, msg, len, Clause::kWellFormed);
    auto out = gadgets::PoseidonHashBits(cs, bits, Clause::kCommitment);
    ASSERT_FALSE(cs.FirstUnsatisfied().has_value()) << "len=" << len;
    ASSERT_EQ(cs.Value(out), poseidon::HashBytes(msg)) << "len=" << len;
  }
}

TEST(GadgetBridgeTest, PoseidonNodeMatchesNative) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const Fr l = RandomFr(rng), r = RandomFr(rng);
    ConstraintSystem cs(true);
    Var lv = cs.AllocPrivate(l), rv = cs.AllocPrivate(r);
    auto out = gadgets::PoseidonHashNode(cs, lv, rv, Clause::kMembership);
    ASSERT_FALSE(cs.FirstUnsatisfied().has_value());
    ASSERT_EQ(cs.Value(out), poseidon::HashNode(l, r));
  }
}

Bytes BitsToBytes(const ConstraintSystem& cs, const gadgets::Bits& bits) {
  Bytes out(bits.size() / 8);
  for (size_t i = 0; i < bits.size(); ++i) {
    const Fr v = cs.Value(bits[i]);
    EXPECT_TRUE(v.IsZero() || v.IsOne());
    if (v.IsOne()) out[i / 8] |= static_cast<uint8_t>(0x80 >> (i % 8));
  }
  return out;
}

TEST(GadgetBridgeTest, Sha256MatchesIndependentImplementation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    // Cover one, two and three compression blocks including pad edges.
    static constexpr size_t kEdges[] = {0, 55, 56, 63, 64, 119, 120};
    const size_t len = i < 7 ? kEdges[i] : rng() % 140;
    const Bytes msg = RandomBytesFrom(rng, len);
    ConstraintSystem cs(true);
    auto bits = gadgets::AllocBytes(cs, msg, len, Clause::kWellFormed);
    auto out = Sha256Gadget(cs, bits, Clause::kNullifier);
    ASSERT_EQ(out.size(), 256u);
    ASSERT_FALSE(cs.FirstUnsatisfied().has_value()) << "len=" << len;
    const auto expect = oracle::Sha256(msg);
    ASSERT_EQ(BitsToBytes(cs, out), Bytes(expect.begin(), expect.end()))
        << "len=" << len;
  }
}

TEST(GadgetBridgeTest, Sha256ConstantInputCostsNothing) {
  ConstraintSystem cs(true);
  const Bytes msg = {'a', 'b', 'c'};
  auto out = Sha256Gadget(cs, gadgets::ConstantBytes(msg), Clause::kInternal);
  EXPECT_EQ(cs.num_constraints(), 0u);
  const Digest expect = Sha256(msg);
  EXPECT_EQ(BitsToBytes(cs, out),
            Bytes(expect.bytes.begin(), expect.bytes.end()));
}

TEST(GadgetTest, FlippedWitnessBitBreaksHash) {
  const Bytes msg = {1, 2, 3, 4, 5};
  ConstraintSystem cs(true);
  auto bits = gadgets::AllocBytes(cs, msg, msg.size(), Clause::kWellFormed);
  auto out = gadgets::PoseidonHashBits(cs, bits, Clause::kCommitment);
  Var pub = cs.AllocPrivate(poseidon::HashBytes(Bytes{1, 2, 3, 4, 4}));
  cs.EnforceEqual(out, pub, Clause::kCommitment);
  auto row = cs.FirstUnsatisfied();
  ASSERT_TRUE(row.has_value());
  EXPECT_EQ(cs.constraints()[*row].clause, Clause::kCommitment);
}

TEST(GadgetTest, CondSwap) {
  for (uint64_t bit : {0, 1}) {
    ConstraintSystem cs(true);
    Var b = cs.AllocPrivate(Fr::FromU64(bit));
    Var x = cs.AllocPrivate(Fr::FromU64(10));
    Var y = cs.AllocPrivate(Fr::FromU64(20));
    auto [l, r] = gadgets::CondSwap(cs, b, x, y, Clause::kMembership);
    EXPECT_FALSE(cs.FirstUnsatisfied().has_value());
    EXPECT_EQ(cs.Value(l), Fr::FromU64(bit ? 20 : 10));
    EXPECT_EQ(cs.Value(r), Fr::FromU64(bit ? 10 : 20));
  }
}

// x^3 + x + 5 = out, with `out` public.
ConstraintSystem Cubic(bool with_values, uint64_t x, uint64_t out) {
  ConstraintSystem cs(with_values);
  Var o = cs.AllocPublic(Fr::FromU64(out));
  Var xv = cs.AllocPrivate(Fr::FromU64(x));
  Var x2 = cs.AllocPrivate(Fr::FromU64(x * x));
  Var x3 = cs.AllocPrivate(Fr::FromU64(x * x * x));
  cs.Enforce(xv, xv, x2, Clause::kInternal);
  cs.Enforce(x2, xv, x3, Clause::kInternal);
  LinearCombination sum = LinearCombination(x3) + xv;
  sum.AddConstant(Fr::FromU64(5));
  cs.EnforceEqual(sum, o, Clause::kInternal);
  return cs;
}

groth16::ToxicWaste FixedToxic(uint64_t seed) {
  std::mt19937_64 rng(seed);
  return {RandomFr(rng), RandomFr(rng), RandomFr(rng), RandomFr(rng),
          RandomFr(rng)};
}

TEST(Groth16Test, QuotientSatisfiesDivisibility) {
  // A(tau) B(tau) - C(tau) = h(tau) Z(tau), checked against Lagrange
  // interpolation of the row evaluations.
  const ConstraintSystem cs = Cubic(true, 3, 35);
  const uint64_t n = EvaluationDomain::ForSize(cs.num_constraints() + 2).size();
  const auto h = groth16::ComputeH(cs, n);
  std::mt19937_64 rng(8);
  const Fr tau = RandomFr(rng);
  const auto d = EvaluationDomain::ForSize(n);
  const auto lag = d.LagrangeAt(tau);
  Fr a, b, c;
  for (size_t j = 0; j < cs.num_constraints(); ++j) {
    const auto& k = cs.constraints()[j];
    a += lag[j] * k.a.Evaluate(cs.assignment());
    b += lag[j] * k.b.Evaluate(cs.assignment());
    c += lag[j] * k.c.Evaluate(cs.assignment());
  }
  for (size_t i = 0; i <= cs.num_public(); ++i) {
    a += lag[cs.num_constraints() + i] * cs.assignment()[i];
  }
  Fr ht;
  for (size_t j = h.size(); j-- > 0;) ht = ht * tau + h[j];
  EXPECT_EQ(a * b - c, ht * d.VanishingAt(tau));

  EXPECT_THROW(groth16::ComputeH(Cubic(true, 3, 36), n), PreconditionError);
}

TEST(Groth16Test, ToyCircuitRoundTrip) {
  const auto kp = groth16::Setup(Cubic(false, 0, 0), FixedToxic(9));
  std::mt19937_64 rng(10);
  auto draw = [&rng] { return RandomFr(rng); };
  const auto proof = groth16::Prove(kp.pk, Cubic(true, 3, 35), draw);
  const Fr good[1] = {Fr::FromU64(35)};
  const Fr bad[1] = {Fr::FromU64(36)};
  EXPECT_TRUE(groth16::Verify(kp.vk, good, proof));
  EXPECT_FALSE(groth16::Verify(kp.vk, bad, proof));
  EXPECT_FALSE(groth16::Verify(kp.vk, {}, proof));

  // Re-randomized proofs differ but both verify.
  const auto proof2 = groth16::Prove(kp.pk, Cubic(true, 3, 35), draw);
  EXPECT_NE(proof.Serialize(), proof2.Serialize());
  EXPECT_TRUE(groth16::Verify(kp.vk, good, proof2));

  auto bytes = proof.Serialize();
  auto parsed = groth16::Proof::Parse(bytes);
  ASSERT_TRUE(parsed.has_value());
  EXPECT_TRUE(groth16::Verify(kp.vk, good, *parsed));

  // Keys from an unrelated setup reject.
  const auto other = groth16::Setup(Cubic(false, 0, 0), FixedToxic(11));
  EXPECT_FALSE(groth16::Verify(other.vk, good, proof));

  Bytes pk_bytes, vk_bytes;
  kp.pk.Serialize(pk_bytes);
  kp.vk.Serialize(vk_bytes);
  ByteReader pr(pk_bytes), vr(vk_bytes);
  const auto pk2 = groth16::ProvingKey::Parse(pr);
  const auto vk2 = groth16::VerifyingKey::Parse(vr);
  EXPECT_TRUE(pr.empty());
  EXPECT_TRUE(vr.empty());
  const auto proof3 = groth16::Prove(pk2, Cubic(true, 3, 35), draw);
  EXPECT_TRUE(groth16::Verify(vk2, good, proof3));
}

TEST(Groth16Test, ForgedCombinationsReject) {
  const auto kp = groth16::Setup(Cubic(false, 0, 0), FixedToxic(12));
  std::mt19937_64 rng(13);
  auto draw = [&rng] { return RandomFr(rng); };
  const auto p = groth16::Prove(kp.pk, Cubic(true, 2, 15), draw);
  const Fr x[1] = {Fr::FromU64(15)};
  auto tweak = p;
  tweak.a = tweak.a + G1::Generator();
  EXPECT_FALSE(groth16::Verify(kp.vk, x, tweak));
  tweak = p;
  tweak.c = G1::Identity();
  EXPECT_FALSE(groth16::Verify(kp.vk, x, tweak));
  tweak = p;
  tweak.b = tweak.b * Fr::FromU64(2);
  EXPECT_FALSE(groth16::Verify(kp.vk, x, tweak));
}

TEST(Groth16Test, ProverRejectsMismatchedCircuit) {
  const auto kp = groth16::Setup(Cubic(false, 0, 0), FixedToxic(14));
  ConstraintSystem other(true);
  other.AllocPublic(Fr::One());
  EXPECT_THROW(groth16::Prove(kp.pk, other, [] { return Fr::One(); }),
               PreconditionError);
}

}  // namespace
}  // namespace anonkey::zkp
