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

#ifndef ANONKEY_ZKP_GROTH16_H_
#define ANONKEY_ZKP_GROTH16_H_

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/zkp/curve.h"
#include "anonkey/zkp/r1cs.h"

// Groth16 over BLS12-381 for an arbitrary rank-1 constraint system.
namespace anonkey::zkp::groth16 {

// The five setup trapdoors. Must be discarded after Setup.
struct ToxicWaste {
  Fr tau, alpha, beta, gamma, delta;
};

struct ProvingKey {
  uint64_t num_variables = 0;
  uint64_t num_public = 0;
  uint64_t num_constraints = 0;
  uint64_t domain_size = 0;
  G1 alpha1, beta1, delta1;
  G2 beta2, delta2;
  std::vector<blst_p1_affine> a_query;   // every variable
  std::vector<blst_p1_affine> b1_query;  // every variable
  std::vector<blst_p2_affine> b2_query;  // every variable
  std::vector<blst_p1_affine> l_query;   // private variables only
  std::vector<blst_p1_affine> h_query;   // domain_size - 1 powers

  void Serialize(Bytes& out) const;
  // Points are checked to be on the curve; subgroup checks are skipped since
  // the proving key is produced and read by the same party.
  static ProvingKey Parse(ByteReader& r);
};

struct VerifyingKey {
  G1 alpha1;
  G2 beta2, gamma2, delta2;
  std::vector<G1> ic;  // constant-one plus one per public input
  Gt alpha_beta;       // e(alpha1, beta2), derived

  void Serialize(Bytes& out) const;
  // Full subgroup checks on every point.
  static VerifyingKey Parse(ByteReader& r);
};

struct Proof {
  static constexpr size_t kBytes =
      G1::kCompressedBytes + G2::kCompressedBytes + G1::kCompressedBytes;
  G1 a;
  G2 b;
  G1 c;

  std::array<uint8_t, kBytes> Serialize() const;
  // nullopt for bad lengths or points not in the prime-order subgroups.
  static std::optional<Proof> Parse(ByteSpan data);
};

struct KeyPair {
  ProvingKey pk;
  VerifyingKey vk;
};

KeyPair Setup(const ConstraintSystem& shape, const ToxicWaste& toxic);

// `random_scalar` supplies the blinding factors r and s.
Proof Prove(const ProvingKey& pk, const ConstraintSystem& cs,
            const std::function<Fr()>& random_scalar);

// `public_inputs` excludes the constant one.
bool Verify(const VerifyingKey& vk, std::span<const Fr> public_inputs,
            const Proof& proof);

// Quotient coefficients h(X) = (A(X) B(X) - C(X)) / Z(X) for an assignment.
// Exposed for tests.
std::vector<Fr> ComputeH(const ConstraintSystem& cs, uint64_t domain_size);

}  // namespace anonkey::zkp::groth16

#endif  // ANONKEY_ZKP_GROTH16_H_
