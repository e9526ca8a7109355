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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "anonkey/core/certificate.h"
#include "anonkey/core/config.h"
#include "anonkey/core/encoding.h"
#include "anonkey/core/entropy.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/field.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/kem.h"
#include "anonkey/core/note.h"
#include "anonkey/core/tlv.h"
#include "gtest/gtest.h"
#include "oracle.h"

namespace anonkey {
namespace {

Bytes RandomInput(std::mt19937_64& rng, size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<uint8_t>(rng());
  return out;
}

oracle::Digest32 ToArray(const Digest& d) { return d.bytes; }

mpz_class ToMpz(const Fr& x) {
  auto b = x.ToBytesBE();
  return oracle::FromBytes(b.data(), b.size());
}

TEST(FieldTest, ArithmeticMatchesGmp) {
  std::mt19937_64 rng(1);
  const mpz_class& r = oracle::Modulus();
  for (int i = 0; i < 200; ++i) {
    Bytes a_bytes = RandomInput(rng, 40);
    Bytes b_bytes = RandomInput(rng, 40);
    Fr a = Fr::FromBytesReduced(a_bytes);
    Fr b = Fr::FromBytesReduced(b_bytes);
    mpz_class ma = oracle::FromBytes(a_bytes.data(), a_bytes.size()) % r;
    mpz_class mb = oracle::FromBytes(b_bytes.data(), b_bytes.size()) % r;
    ASSERT_EQ(ToMpz(a), ma);
    EXPECT_EQ(ToMpz(a + b), oracle::Reduce(ma + mb));
    EXPECT_EQ(ToMpz(a - b), oracle::Reduce(ma - mb));
    EXPECT_EQ(ToMpz(a * b), oracle::Reduce(ma * mb));
    EXPECT_EQ(ToMpz(-a), oracle::Reduce(-ma));
    EXPECT_EQ(ToMpz(a.Inverse()), oracle::Inv(ma));
    mpz_class p;
    mpz_powm_ui(p.get_mpz_t(), ma.get_mpz_t(), 12345, r.get_mpz_t());
    EXPECT_EQ(ToMpz(a.Pow(12345)), p);
  }
}

TEST(FieldTest, CanonicalDecoding) {
  auto r_minus_1 = ScalarModulusMinusOne();
  auto x = Fr::FromBytesBE(r_minus_1);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE((*x + Fr::One()).IsZero());
  auto r_bytes = r_minus_1;
  r_bytes[31] += 1;
  EXPECT_FALSE(Fr::FromBytesBE(r_bytes).has_value());
  EXPECT_EQ(ToMpz(Fr::PowerOfTwo(64)), mpz_class(1) << 64);
  EXPECT_EQ(ToMpz(Fr::PowerOfTwo(254)), mpz_class(1) << 254);
}

TEST(FieldTest, BatchInvertSkipsZero) {
  std::vector<Fr> v = {Fr::FromU64(3), Fr::Zero(), Fr::FromU64(7)};
  BatchInvert(v);
  EXPECT_EQ(v[0] * Fr::FromU64(3), Fr::One());
  EXPECT_TRUE(v[1].IsZero());
  EXPECT_EQ(v[2] * Fr::FromU64(7), Fr::One());
}

TEST(HashTest, Sha256EmptyStringVector) {
  Hasher h(HashProfile::kSha256);
  EXPECT_EQ(h.Hash({}).Hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(ToArray(h.Hash({})), oracle::Sha256({}));
}

TEST(HashTest, Sha256MatchesIndependentImplementation) {
  std::mt19937_64 rng(2);
  Hasher h(HashProfile::kSha256);
  for (size_t n = 0; n < 300; n += 7) {
    Bytes in = RandomInput(rng, n);
    EXPECT_EQ(ToArray(h.Hash(in)), oracle::Sha256(in)) << n;
  }
}

TEST(HashTest, AlgebraicMatchesOracle) {
  std::mt19937_64 rng(3);
  Hasher h(HashProfile::kAlgebraic);
  for (size_t n = 0; n <= 100; ++n) {
    Bytes in = RandomInput(rng, n);
    EXPECT_EQ(ToArray(h.Hash(in)), oracle::Hash("algebraic", in)) << n;
  }
}

TEST(HashTest, NodeHashMatchesOracle) {
  std::mt19937_64 rng(4);
  for (const char* profile : {"sha256", "algebraic"}) {
    Hasher h(ParseHashProfile(profile));
    for (int i = 0; i < 20; ++i) {
      Digest l = h.Hash(RandomInput(rng, 10));
      Digest r = h.Hash(RandomInput(rng, 10));
      EXPECT_EQ(ToArray(h.HashNode(l, r)),
                oracle::HashNode(profile, l.bytes, r.bytes));
      EXPECT_NE(h.HashNode(l, r), h.HashNode(r, l));
    }
  }
}

TEST(HashTest, Deterministic) {
  for (auto p : {HashProfile::kSha256, HashProfile::kAlgebraic}) {
    Hasher h(p);
    EXPECT_EQ(h.Hash(AsBytes("abc")), h.Hash(AsBytes("abc")));
  }
}

TEST(HashTest, LengthIsBoundIntoAlgebraicHash) {
  Hasher h(HashProfile::kAlgebraic);
  // Same packed integer value, different byte lengths.
  EXPECT_NE(h.Hash(Bytes{0x01}), h.Hash(Bytes{0x00, 0x01}));
  EXPECT_NE(h.Hash({}), h.Hash(Bytes{0x00}));
}

TEST(HashTest, NoCollisionsOnRandomSweep) {
  for (auto p : {HashProfile::kSha256, HashProfile::kAlgebraic}) {
    Hasher h(p);
    std::mt19937_64 rng(5);
    std::set<Bytes> inputs;
    std::set<Digest> outputs;
    while (inputs.size() < 10000) {
      Bytes in = RandomInput(rng, 1 + rng() % 40);
      if (!inputs.insert(in).second) continue;
      outputs.insert(h.Hash(in));
    }
    EXPECT_EQ(outputs.size(), 10000u) << HashProfileName(p);
  }
}

TEST(HashTest, EmptyLeafIsHashOfZeroByte) {
  for (const char* profile : {"sha256", "algebraic"}) {
    Hasher h(ParseHashProfile(profile));
    EXPECT_EQ(ToArray(h.EmptyLeaf()), oracle::Hash(profile, Bytes{0x00}));
  }
}

TEST(HashTest, AlgebraicNodeRejectsNonCanonicalDigest) {
  Hasher h(HashProfile::kAlgebraic);
  Digest bad;
  bad.bytes.fill(0xff);
  EXPECT_THROW(h.HashNode(bad, h.EmptyLeaf()), ParseError);
}

TEST(HashTest, ProfileNames) {
  EXPECT_EQ(ParseHashProfile("sha256"), HashProfile::kSha256);
  EXPECT_EQ(ParseHashProfile("algebraic"), HashProfile::kAlgebraic);
  EXPECT_THROW(ParseHashProfile("md5"), ConfigError);
}

TEST(EntropyTest, MockStreamMatchesOracleAndIsConsuming) {
  MockEntropySource src(42);
  SecretBytes a = src.Draw(40);
  SecretBytes b = src.Draw(70);
  Bytes expected = oracle::MockEntropy(42, 110);
  Bytes got = a.Copy();
  Append(got, b.span());
  EXPECT_EQ(got, expected);
  EXPECT_EQ(MockEntropySource::StreamPrefix(42, 110), expected);
  EXPECT_EQ(src.bytes_served(), 110u);
}

TEST(EntropyTest, InjectedFailureDrawsNothing) {
  MockEntropySource src(1);
  src.FailNextDraw();
  EXPECT_THROW(src.Draw(16), EntropyError);
  EXPECT_EQ(src.bytes_served(), 0u);
  EXPECT_EQ(src.Draw(16).Copy(), oracle::MockEntropy(1, 16));
}

TEST(EntropyTest, OsSourceByteEntropy) {
  OsEntropySource src;
  SecretBytes mb = src.Draw(1 << 20);
  EXPECT_GT(ShannonBitsPerByte(mb.span()), 7.9);
}

TEST(EntropyTest, ExternalSourceReadsFileAsStream) {
  auto path = std::filesystem::temp_directory_path() /
              ("anonkey-ext-" + std::to_string(::getpid()));
  Bytes content = oracle::MockEntropy(9, 100);
  {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(content.data()), content.size());
  }
  ExternalEntropySource src({path.string(), std::chrono::microseconds(100), 0});
  Bytes got = src.Draw(60).Copy();
  Append(got, src.Draw(40).span());
  EXPECT_EQ(got, content);
  EXPECT_THROW(src.Draw(1), EntropyError);
  std::filesystem::remove(path);
}

TEST(KemTest, RoundtripAllLambdas) {
  MockEntropySource entropy(3);
  std::mt19937_64 rng(6);
  for (unsigned lambda : {128u, 192u, 256u}) {
    KemKeyPair kp = KemKeygen(KemProfile::kDhkem, lambda, entropy);
    EXPECT_TRUE(KemKeyPairMatches(kp.pk, kp.sk));
    Bytes m = RandomInput(rng, 32);
    EncapsulatedKey c = KemEncap(m, kp.pk);
    EXPECT_EQ(KemDecap(c, kp.sk).Copy(), m);
  }
}

TEST(KemTest, EncapsulationIsRandomized) {
  MockEntropySource entropy(4);
  KemKeyPair kp = KemKeygen(KemProfile::kDhkem, 256, entropy);
  Bytes m(32, 0x5a);
  EncapsulatedKey c1 = KemEncap(m, kp.pk);
  EncapsulatedKey c2 = KemEncap(m, kp.pk);
  EXPECT_NE(c1.ciphertext, c2.ciphertext);
  EXPECT_EQ(KemDecap(c1, kp.sk).Copy(), m);
  EXPECT_EQ(KemDecap(c2, kp.sk).Copy(), m);
}

TEST(KemTest, WrongSecretKeyIsExplicitError) {
  MockEntropySource entropy(5);
  KemKeyPair a = KemKeygen(KemProfile::kDhkem, 256, entropy);
  KemKeyPair b = KemKeygen(KemProfile::kDhkem, 256, entropy);
  KemKeyPair c = KemKeygen(KemProfile::kDhkem, 128, entropy);
  EncapsulatedKey ct = KemEncap(Bytes(32, 1), a.pk);
  EXPECT_THROW(KemDecap(ct, b.sk), DecryptionError);
  EXPECT_THROW(KemDecap(ct, c.sk), DecryptionError);
  EXPECT_FALSE(KemKeyPairMatches(a.pk, b.sk));
}

TEST(KemTest, LongMaterialIsChunked) {
  MockEntropySource entropy(6);
  std::mt19937_64 rng(7);
  KemKeyPair kp = KemKeygen(KemProfile::kDhkem, 256, entropy);
  Bytes m = RandomInput(rng, 10000);
  EncapsulatedKey c = KemEncap(m, kp.pk);
  EncapsulatedKeyInfo info = InspectEncapsulatedKey(c);
  EXPECT_EQ(info.chunk_count, 3);
  EXPECT_EQ(info.total_length, 10000u);
  EXPECT_EQ(KemDecap(c, kp.sk).Copy(), m);

  EncapsulatedKey tampered = c;
  tampered.ciphertext[tampered.ciphertext.size() - 5] ^= 1;
  EXPECT_THROW(KemDecap(tampered, kp.sk), DecryptionError);
  EncapsulatedKey truncated = c;
  truncated.ciphertext.resize(c.ciphertext.size() - 1);
  EXPECT_THROW(KemDecap(truncated, kp.sk), Error);
}

TEST(KemTest, RejectsEmptyMaterial) {
  MockEntropySource entropy(7);
  KemKeyPair kp = KemKeygen(KemProfile::kDhkem, 128, entropy);
  EXPECT_THROW(KemEncap({}, kp.pk), PreconditionError);
}

TEST(KemTest, RsaOaepProfile) {
  MockEntropySource entropy(8);
  EXPECT_THROW(KemKeygen(KemProfile::kRsaOaep, 256, entropy),
               PreconditionError);
  KemKeyPair kp = KemKeygen(KemProfile::kRsaOaep, 128, entropy);
  EXPECT_EQ(KemProfileOfKey(kp.pk), KemProfile::kRsaOaep);
  EXPECT_TRUE(KemKeyPairMatches(kp.pk, kp.sk));
  std::mt19937_64 rng(9);
  Bytes m = RandomInput(rng, 1000);
  EncapsulatedKey c = KemEncap(m, kp.pk);
  EXPECT_EQ(InspectEncapsulatedKey(c).chunk_count, 4);
  EXPECT_EQ(KemDecap(c, kp.sk).Copy(), m);
  EXPECT_NE(KemEncap(m, kp.pk).ciphertext, c.ciphertext);
  KemKeyPair dh = KemKeygen(KemProfile::kDhkem, 128, entropy);
  EXPECT_THROW(KemDecap(c, dh.sk), DecryptionError);
}

TEST(NoteTest, UserInitShape) {
  MockEntropySource entropy(10);
  Note n = UserInit(256, KemProfile::kDhkem, entropy);
  EXPECT_EQ(n.rho.size(), 32u);
  EXPECT_EQ(n.lambda(), 256u);
  EXPECT_TRUE(KemKeyPairMatches(n.pk, n.sk));
  Bytes m(48, 3);
  EXPECT_EQ(KemDecap(KemEncap(m, n.pk), n.sk).Copy(), m);
  EXPECT_EQ(UserInit(128, KemProfile::kDhkem, entropy).rho.size(), 16u);
}

TEST(NoteTest, UnsupportedLambdaRejected) {
  MockEntropySource entropy(11);
  EXPECT_THROW(UserInit(64, KemProfile::kDhkem, entropy), PreconditionError);
}

TEST(NoteTest, EntropyFailureYieldsNoNote) {
  MockEntropySource entropy(12);
  entropy.FailNextDraw();
  EXPECT_THROW(UserInit(256, KemProfile::kDhkem, entropy), EntropyError);
}

TEST(NoteTest, RhoValuesAreDistinct) {
  OsEntropySource entropy;
  std::set<Bytes> rhos;
  for (int i = 0; i < 1000; ++i) {
    rhos.insert(UserInit(256, KemProfile::kDhkem, entropy).rho);
  }
  EXPECT_EQ(rhos.size(), 1000u);
}

TEST(NoteTest, SerializationRoundtrip) {
  MockEntropySource entropy(13);
  Note n = UserInit(192, KemProfile::kDhkem, entropy);
  Bytes s = n.Serialize();
  EXPECT_EQ(s[0], 1);
  Note back = Note::Parse(s);
  EXPECT_EQ(back.rho, n.rho);
  EXPECT_EQ(back.pk, n.pk);
  EXPECT_EQ(back.sk, n.sk);
  s[0] = 9;
  EXPECT_THROW(Note::Parse(s), ParseError);
}

class DerivationTest : public ::testing::TestWithParam<const char*> {};

TEST_P(DerivationTest, MatchesIndependentRecomputation) {
  const std::string profile = GetParam();
  Hasher h(ParseHashProfile(profile));
  MockEntropySource entropy(14);
  for (int i = 0; i < 20; ++i) {
    Note n = UserInit(256, KemProfile::kDhkem, entropy);
    oracle::Bytes c_pre = oracle::LengthPrefixed(n.sk.Copy());
    oracle::Bytes rho = oracle::LengthPrefixed(n.rho);
    c_pre.insert(c_pre.end(), rho.begin(), rho.end());
    oracle::Bytes n_pre = oracle::LengthPrefixed(n.pk);
    n_pre.insert(n_pre.end(), rho.begin(), rho.end());
    EXPECT_EQ(ToArray(DeriveCommitment(n, h).value),
              oracle::Hash(profile, c_pre));
    EXPECT_EQ(ToArray(DeriveNullifier(n, h).value),
              oracle::Hash(profile, n_pre));
  }
}

TEST_P(DerivationTest, DeterministicAndRhoSensitive) {
  Hasher h(ParseHashProfile(GetParam()));
  MockEntropySource entropy(15);
  for (int i = 0; i < 100; ++i) {
    Note a = UserInit(256, KemProfile::kDhkem, entropy);
    Note b;
    b.rho = a.rho;
    b.rho[i % b.rho.size()] ^= 0x01;
    b.pk = a.pk;
    b.sk = a.sk;
    EXPECT_EQ(DeriveCommitment(a, h), DeriveCommitment(a, h));
    EXPECT_EQ(DeriveNullifier(a, h), DeriveNullifier(a, h));
    EXPECT_NE(DeriveCommitment(a, h), DeriveCommitment(b, h));
    EXPECT_NE(DeriveNullifier(a, h), DeriveNullifier(b, h));
    EXPECT_NE(DeriveNullifier(a, h).value, DeriveCommitment(a, h).value);
  }
}

TEST_P(DerivationTest, CommitmentsShareNoFieldWithNullifiers) {
  Hasher h(ParseHashProfile(GetParam()));
  MockEntropySource entropy(16);
  std::vector<Digest> cs, ns;
  for (int i = 0; i < 100; ++i) {
    Note n = UserInit(256, KemProfile::kDhkem, entropy);
    cs.push_back(DeriveCommitment(n, h).value);
    ns.push_back(DeriveNullifier(n, h).value);
  }
  std::mt19937_64 rng(17);
  std::shuffle(ns.begin(), ns.end(), rng);
  std::set<Digest> cset(cs.begin(), cs.end());
  for (const auto& nf : ns) EXPECT_EQ(cset.count(nf), 0u);
}

INSTANTIATE_TEST_SUITE_P(Profiles, DerivationTest,
                         ::testing::Values("sha256", "algebraic"));

class CertificateTest : public ::testing::Test {
 protected:
  CertificateTest()
      : entropy_(20),
        ca_(TestCa::Generate(entropy_)),
        user_(GenerateSigningKey(entropy_)),
        cert_(ca_.Issue("alice", user_.verify_key)) {}

  MockEntropySource entropy_;
  TestCa ca_;
  SigningKeyPair user_;
  Certificate cert_;
};

TEST_F(CertificateTest, HonestSignatureVerifies) {
  Digest c = Sha256(AsBytes("commitment"));
  Bytes sig = Sign(c.span(), user_.signing_key);
  EXPECT_TRUE(VerifySign(cert_, ca_.verify_key(), c.span(), sig));
  Digest other = Sha256(AsBytes("other"));
  EXPECT_FALSE(VerifySign(cert_, ca_.verify_key(), other.span(), sig));
}

TEST_F(CertificateTest, CorruptedIssuerSignatureFails) {
  Bytes msg = {1, 2, 3};
  Bytes sig = Sign(msg, user_.signing_key);
  Certificate bad = cert_;
  bad.issuer_signature[10] ^= 0x40;
  EXPECT_FALSE(VerifySign(bad, ca_.verify_key(), msg, sig));
  Certificate renamed = cert_;
  renamed.subject_id = "mallory";
  EXPECT_FALSE(VerifySign(renamed, ca_.verify_key(), msg, sig));
}

TEST_F(CertificateTest, SigningKeyMustMatchCertificate) {
  SigningKeyPair other = GenerateSigningKey(entropy_);
  Bytes msg = {4, 5, 6};
  EXPECT_FALSE(VerifySign(cert_, ca_.verify_key(), msg,
                          Sign(msg, other.signing_key)));
}

TEST_F(CertificateTest, SingleByteMutationsFlipVerification) {
  Digest d = Sha256(AsBytes("x"));
  Bytes msg(d.bytes.begin(), d.bytes.end());
  Bytes sig = Sign(msg, user_.signing_key);
  for (size_t i = 0; i < msg.size(); i += 3) {
    Bytes m = msg;
    m[i] ^= 0x01;
    EXPECT_FALSE(VerifySign(cert_, ca_.verify_key(), m, sig)) << i;
  }
  for (size_t i = 0; i < sig.size(); i += 3) {
    Bytes s = sig;
    s[i] ^= 0x80;
    EXPECT_FALSE(VerifySign(cert_, ca_.verify_key(), msg, s)) << i;
  }
}

TEST_F(CertificateTest, SerializationAndParseErrors) {
  Bytes wire = cert_.Serialize();
  Certificate back = Certificate::Parse(wire);
  EXPECT_EQ(back.subject_id, "alice");
  EXPECT_EQ(back.subject_verify_key, cert_.subject_verify_key);
  EXPECT_TRUE(VerifyCertificate(back, ca_.verify_key()));
  Bytes truncated(wire.begin(), wire.end() - 3);
  EXPECT_THROW(Certificate::Parse(truncated), CertificateParseError);
  EXPECT_THROW(Certificate::Parse(Bytes{}), CertificateParseError);
  Bytes short_key = TlvWriter(1)
                        .Add(1, AsBytes("a"))
                        .Add(2, Bytes(5))
                        .Add(3, Bytes(64))
                        .Finish();
  EXPECT_THROW(Certificate::Parse(short_key), CertificateParseError);
}

TEST(ConfigTest, ParsesKnownKeys) {
  ProtocolConfig c = ProtocolConfig::FromJson(
      R"({"hash_profile":"sha256","kem_profile":"dhkem","lambda":128})");
  EXPECT_EQ(c.hash_profile, HashProfile::kSha256);
  EXPECT_EQ(c.lambda, 128u);
  ProtocolConfig back = ProtocolConfig::FromJson(c.ToJson());
  EXPECT_EQ(back.hash_profile, c.hash_profile);
  EXPECT_THROW(ProtocolConfig::FromJson(R"({"hash":"sha256"})"), ConfigError);
  EXPECT_THROW(ProtocolConfig::FromJson(R"({"lambda":64})"), ConfigError);
  EXPECT_THROW(
      ProtocolConfig::FromJson(R"({"kem_profile":"rsa-oaep","lambda":256})"),
      ConfigError);
}

TEST(TlvTest, RejectsDuplicatesAndTruncation) {
  Bytes dup = TlvWriter(1).Add(1, Bytes{1}).Add(1, Bytes{2}).Finish();
  EXPECT_THROW(TlvRecord::Parse(dup, 1), ParseError);
  Bytes ok = TlvWriter(1).AddU32(2, 7).Finish();
  EXPECT_EQ(TlvRecord::Parse(ok, 1).GetU32(2), 7u);
  ok.pop_back();
  EXPECT_THROW(TlvRecord::Parse(ok, 1), ParseError);
}

TEST(EncodingTest, LengthPrefix) {
  EXPECT_EQ(Encode(Bytes{0xaa, 0xbb}), (Bytes{0, 0, 0, 2, 0xaa, 0xbb}));
  EXPECT_EQ(EncodePair(Bytes{}, Bytes{1}), (Bytes{0, 0, 0, 0, 0, 0, 0, 1, 1}));
}

}  // namespace
}  // namespace anonkey
