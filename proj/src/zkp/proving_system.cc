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

#include "anonkey/zkp/proving_system.h"

#include <algorithm>
#include <cctype>
#include <functional>

#include <spdlog/spdlog.h>

#include "anonkey/core/file_util.h"
#include "anonkey/core/hash.h"
#include "anonkey/core/symmetric.h"
#include "anonkey/zkp/groth16.h"

namespace anonkey::zkp {
namespace {

constexpr uint8_t kFormatVersion = 1;
constexpr std::array<uint8_t, 4> kProvingMagic = {'A', 'K', 'P', 'K'};
constexpr std::array<uint8_t, 4> kVerifyingMagic = {'A', 'K', 'V', 'K'};
constexpr size_t kMockTagBytes = 32;

// Key header: magic || version || backend || config || fingerprint || shape.
Bytes WriteHeader(std::span<const uint8_t, 4> magic, BackendKind backend,
                  const RelationConfig& config, const Digest& shape) {
  Bytes out(magic.begin(), magic.end());
  out.push_back(kFormatVersion);
  out.push_back(static_cast<uint8_t>(backend));
  Append(out, config.Serialize());
  Append(out, CircuitFingerprint(config).bytes);
  Append(out, shape.bytes);
  return out;
}

BackendKind ParseBackendByte(uint8_t b) {
  if (b != static_cast<uint8_t>(BackendKind::kGroth16) &&
      b != static_cast<uint8_t>(BackendKind::kMock)) {
    throw ParseError("unknown proving backend " + std::to_string(b));
  }
  return static_cast<BackendKind>(b);
}

struct Header {
  KeyInfo info;
  Digest shape;
};

Header ReadHeader(ByteReader& r, std::span<const uint8_t, 4> magic) {
  ByteSpan m = r.Take(magic.size());
  if (!std::equal(m.begin(), m.end(), magic.begin())) {
    throw ParseError("bad key magic");
  }
  if (r.U8() != kFormatVersion) throw ParseError("unsupported key version");
  Header h;
  h.info.backend = ParseBackendByte(r.U8());
  h.info.config = RelationConfig::Parse(r);
  h.info.config.Validate();
  h.info.fingerprint = Digest::FromSpan(r.Take(Digest::kSize));
  h.shape = Digest::FromSpan(r.Take(Digest::kSize));
  if (h.info.fingerprint != CircuitFingerprint(h.info.config)) {
    throw FingerprintMismatchError("key fingerprint does not match its config");
  }
  return h;
}

// Deterministic scalar stream for test-mode setup.
class SeededScalars {
 public:
  explicit SeededScalars(uint64_t seed) : seed_(seed) {}
  Fr Next() {
    Bytes in = {'a', 'n', 'o', 'n', 'k', 'e', 'y', '/', 's', 'e', 't',
                'u', 'p'};
    AppendU64BE(in, seed_);
    AppendU64BE(in, counter_++);
    return Fr::FromBytesReduced(Sha256(in).bytes);
  }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

Fr RandomNonZeroScalar(const std::function<Fr()>& draw) {
  for (;;) {
    Fr k = draw();
    if (!k.IsZero()) return k;
  }
}

Fr OsScalar() {
  // 64 bytes reduced mod r: statistically uniform.
  Bytes b = RandomBytes(64);
  return Fr::FromBytesReduced(b);
}

Digest MockTag(ByteSpan secret, const Digest& fingerprint, const Statement& x) {
  Bytes msg(fingerprint.bytes.begin(), fingerprint.bytes.end());
  Append(msg, x.Serialize());
  return Digest::FromSpan(HmacSha256(secret, msg));
}

void CheckSupported(BackendKind backend, const RelationConfig& config) {
  config.Validate();
  if (backend == BackendKind::kMock) return;
  std::string reason;
  if (!CircuitSupports(config, &reason)) throw UnsupportedError(reason);
}

}  // namespace

std::string_view BackendName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kGroth16:
      return "groth16";
    case BackendKind::kMock:
      return "mock";
  }
  return "unknown";
}

BackendKind ParseBackendKind(std::string_view name) {
  if (name == "groth16") return BackendKind::kGroth16;
  if (name == "mock") return BackendKind::kMock;
  throw ConfigError("unknown proving backend: " + std::string(name));
}

void Crs::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  WriteFileAtomic(dir / kProvingKeyFile, proving_key);
  WriteFileAtomic(dir / kVerificationKeyFile, verification_key);
  const std::string hex = ToHex(fingerprint.bytes) + "\n";
  WriteFileAtomic(dir / kFingerprintFile,
            ByteSpan(reinterpret_cast<const uint8_t*>(hex.data()), hex.size()));
}

Crs Crs::Load(const std::filesystem::path& dir) {
  Crs crs;
  crs.proving_key = ReadFileBytes(dir / kProvingKeyFile);
  crs.verification_key = ReadFileBytes(dir / kVerificationKeyFile);
  Bytes hex = ReadFileBytes(dir / kFingerprintFile);
  std::string text(hex.begin(), hex.end());
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.pop_back();
  }
  crs.fingerprint = Digest::FromHex(text);
  if (InspectKey(crs.proving_key).fingerprint != crs.fingerprint ||
      InspectKey(crs.verification_key).fingerprint != crs.fingerprint) {
    throw FingerprintMismatchError("CRS files disagree on the fingerprint");
  }
  return crs;
}

KeyInfo InspectKey(ByteSpan key) {
  ByteReader r(key);
  if (key.size() >= 4 &&
      std::equal(kProvingMagic.begin(), kProvingMagic.end(), key.begin())) {
    return ReadHeader(r, kProvingMagic).info;
  }
  return ReadHeader(r, kVerifyingMagic).info;
}

Crs Setup(BackendKind backend, const RelationConfig& config,
          const SetupOptions& options) {
  CheckSupported(backend, config);
  std::function<Fr()> draw = OsScalar;
  std::shared_ptr<SeededScalars> seeded;
  if (options.test_seed) {
    spdlog::warn(
        "TEST MODE: {} setup trapdoors derived from fixed seed {}; proofs "
        "under this CRS are forgeable",
        BackendName(backend), *options.test_seed);
    seeded = std::make_shared<SeededScalars>(*options.test_seed);
    draw = [seeded] { return seeded->Next(); };
  }

  Crs crs;
  crs.fingerprint = CircuitFingerprint(config);
  if (backend == BackendKind::kMock) {
    spdlog::warn("mock proving backend in use: proofs are NOT zero-knowledge "
                 "and NOT sound");
    Bytes secret;
    for (int i = 0; i < 2; ++i) Append(secret, draw().ToBytesBE());
    secret.resize(kMockTagBytes);
    const Digest shape{};
    crs.proving_key = WriteHeader(kProvingMagic, backend, config, shape);
    crs.verification_key = WriteHeader(kVerifyingMagic, backend, config, shape);
    Append(crs.proving_key, secret);
    Append(crs.verification_key, secret);
    return crs;
  }

  const ConstraintSystem shape = BuildCircuit(config);
  const Digest shape_digest = shape.ShapeDigest();
  groth16::ToxicWaste toxic{
      RandomNonZeroScalar(draw), RandomNonZeroScalar(draw),
      RandomNonZeroScalar(draw), RandomNonZeroScalar(draw),
      RandomNonZeroScalar(draw)};
  groth16::KeyPair kp = groth16::Setup(shape, toxic);
  toxic = {};
  crs.proving_key = WriteHeader(kProvingMagic, backend, config, shape_digest);
  kp.pk.Serialize(crs.proving_key);
  crs.verification_key =
      WriteHeader(kVerifyingMagic, backend, config, shape_digest);
  kp.vk.Serialize(crs.verification_key);
  return crs;
}

struct Prover::State {
  KeyInfo info;
  Digest shape;
  Bytes mock_secret;
  groth16::ProvingKey pk;
};

Prover::Prover(std::shared_ptr<const State> state) : state_(std::move(state)) {}

Prover Prover::Load(ByteSpan proving_key) {
  ByteReader r(proving_key);
  Header h = ReadHeader(r, kProvingMagic);
  auto state = std::make_shared<State>();
  state->info = h.info;
  state->shape = h.shape;
  if (h.info.backend == BackendKind::kMock) {
    state->mock_secret = r.TakeBytes(kMockTagBytes);
  } else {
    state->pk = groth16::ProvingKey::Parse(r);
  }
  r.ExpectEnd();
  return Prover(std::move(state));
}

const KeyInfo& Prover::info() const { return state_->info; }

size_t Prover::proof_size() const {
  return 2 + Digest::kSize + (state_->info.backend == BackendKind::kMock
                                  ? kMockTagBytes
                                  : groth16::Proof::kBytes);
}

Bytes Prover::Prove(const Statement& x, const Witness& w) const {
  const KeyInfo& info = state_->info;
  if (auto clause = CheckRelation(info.config, x, w)) {
    throw UnsatisfiedError(*clause, "witness violates the " +
                                        std::string(ClauseName(*clause)) +
                                        " clause");
  }
  Bytes proof = {kFormatVersion, static_cast<uint8_t>(info.backend)};
  Append(proof, info.fingerprint.bytes);
  if (info.backend == BackendKind::kMock) {
    Append(proof, MockTag(state_->mock_secret, info.fingerprint, x).bytes);
    return proof;
  }
  ConstraintSystem cs = BuildCircuit(info.config, &x, &w);
  if (auto row = cs.FirstUnsatisfied()) {
    const Clause clause = cs.constraints()[*row].clause;
    throw UnsatisfiedError(clause, "constraint " + std::to_string(*row) +
                                       " (" + std::string(ClauseName(clause)) +
                                       ") unsatisfied");
  }
  const groth16::Proof p = groth16::Prove(
      state_->pk, cs, [] { return RandomNonZeroScalar(OsScalar); });
  Append(proof, p.Serialize());
  return proof;
}

struct Verifier::State {
  KeyInfo info;
  Bytes mock_secret;
  groth16::VerifyingKey vk;
};

Verifier::Verifier(std::shared_ptr<const State> state)
    : state_(std::move(state)) {}

Verifier Verifier::Load(ByteSpan verification_key) {
  ByteReader r(verification_key);
  Header h = ReadHeader(r, kVerifyingMagic);
  auto state = std::make_shared<State>();
  state->info = h.info;
  if (h.info.backend == BackendKind::kMock) {
    state->mock_secret = r.TakeBytes(kMockTagBytes);
  } else {
    state->vk = groth16::VerifyingKey::Parse(r);
  }
  r.ExpectEnd();
  return Verifier(std::move(state));
}

const KeyInfo& Verifier::info() const { return state_->info; }

VerifyResult Verifier::Verify(const Statement& x, ByteSpan proof) const {
  const KeyInfo& info = state_->info;
  const size_t body = info.backend == BackendKind::kMock
                          ? kMockTagBytes
                          : groth16::Proof::kBytes;
  if (proof.size() != 2 + Digest::kSize + body) {
    return {false, "proof has length " + std::to_string(proof.size()) +
                       ", expected " + std::to_string(2 + Digest::kSize + body)};
  }
  if (proof[0] != kFormatVersion) return {false, "unsupported proof version"};
  if (proof[1] != static_cast<uint8_t>(info.backend)) {
    return {false, "proof backend does not match the verification key"};
  }
  if (!std::equal(info.fingerprint.bytes.begin(), info.fingerprint.bytes.end(),
                  proof.begin() + 2)) {
    return {false, "proof fingerprint does not match the verification key"};
  }
  ByteSpan rest = proof.subspan(2 + Digest::kSize);
  if (info.backend == BackendKind::kMock) {
    const Digest expected = MockTag(state_->mock_secret, info.fingerprint, x);
    if (!ConstantTimeEqual(expected.bytes, rest)) {
      return {false, "mock tag mismatch"};
    }
    return {true, ""};
  }
  auto inputs = PublicInputs(info.config, x);
  if (!inputs) return {false, "statement is not a canonical field encoding"};
  auto p = groth16::Proof::Parse(rest);
  if (!p) return {false, "proof points are not valid group elements"};
  if (!groth16::Verify(state_->vk, *inputs, *p)) {
    return {false, "pairing check failed"};
  }
  return {true, ""};
}

CircuitStats MeasureCircuit(const RelationConfig& config) {
  CheckSupported(BackendKind::kGroth16, config);
  const ConstraintSystem cs = BuildCircuit(config);
  return {cs.num_constraints(), cs.num_variables(), cs.num_public()};
}

}  // namespace anonkey::zkp
