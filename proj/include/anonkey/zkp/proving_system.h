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

#ifndef ANONKEY_ZKP_PROVING_SYSTEM_H_
#define ANONKEY_ZKP_PROVING_SYSTEM_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "anonkey/core/bytes.h"
#include "anonkey/core/digest.h"
#include "anonkey/core/errors.h"
#include "anonkey/zkp/relation.h"

// Setup / Prove / Verify over the redemption relation. Callers only see
// opaque key and proof bytes; the backend is recorded in every header.
namespace anonkey::zkp {

enum class BackendKind : uint8_t {
  kGroth16 = 1,
  // UNSAFE: an HMAC over the statement keyed by a secret shared between
  // prover and verifier. Not zero-knowledge and not sound against anyone
  // holding the verification key. For protocol plumbing tests only.
  kMock = 2,
};

std::string_view BackendName(BackendKind kind);
// Accepts "groth16" and "mock". Throws ConfigError otherwise.
BackendKind ParseBackendKind(std::string_view name);

// Key or proof produced for a different relation configuration or setup.
class FingerprintMismatchError : public Error {
 public:
  using Error::Error;
};

struct SetupOptions {
  // Derive the trapdoors deterministically from this seed. Test mode only;
  // anyone knowing the seed can forge proofs.
  std::optional<uint64_t> test_seed;
};

struct Crs {
  Bytes proving_key;
  Bytes verification_key;
  // Circuit fingerprint, shared by both keys and every proof.
  Digest fingerprint;

  // Writes proving.key, verification.key and fingerprint.hex into `dir`.
  void Save(const std::filesystem::path& dir) const;
  // Reads the three files and checks they agree.
  static Crs Load(const std::filesystem::path& dir);
};

inline constexpr char kProvingKeyFile[] = "proving.key";
inline constexpr char kVerificationKeyFile[] = "verification.key";
inline constexpr char kFingerprintFile[] = "fingerprint.hex";

// Throws UnsupportedError for configurations the circuit does not cover.
// The mock backend accepts every valid configuration.
Crs Setup(BackendKind backend, const RelationConfig& config,
          const SetupOptions& options = {});

// Header fields common to proving keys, verification keys and proofs.
struct KeyInfo {
  BackendKind backend;
  RelationConfig config;
  Digest fingerprint;
};

// Parses just the header of a proving or verification key.
KeyInfo InspectKey(ByteSpan key);

class Prover {
 public:
  // Throws ParseError on malformed keys.
  static Prover Load(ByteSpan proving_key);

  // Throws UnsatisfiedError naming the failing clause when (x, w) is not in
  // the relation.
  Bytes Prove(const Statement& x, const Witness& w) const;

  const KeyInfo& info() const;
  size_t proof_size() const;

 private:
  struct State;
  explicit Prover(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

struct VerifyResult {
  bool accepted = false;
  // Empty on accept; otherwise why the proof was rejected.
  std::string diagnostic;
};

class Verifier {
 public:
  static Verifier Load(ByteSpan verification_key);

  // Never throws on malformed proofs; they are rejected with a diagnostic.
  VerifyResult Verify(const Statement& x, ByteSpan proof) const;

  const KeyInfo& info() const;

 private:
  struct State;
  explicit Verifier(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

// Size statistics of the circuit for `config`.
struct CircuitStats {
  size_t num_constraints = 0;
  size_t num_variables = 0;
  size_t num_public = 0;
};
CircuitStats MeasureCircuit(const RelationConfig& config);

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_PROVING_SYSTEM_H_
