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

#ifndef ANONKEY_CORE_POSEIDON_H_
#define ANONKEY_CORE_POSEIDON_H_

#include <array>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/field.h"

// Poseidon-style permutation over the BLS12-381 scalar field, width 3,
// x^5 S-box, 8 full rounds and 57 partial rounds. Round constants are
// SHA-256 outputs in counter mode under a fixed label, reduced mod r; the
// linear layer is the 3x3 Cauchy matrix M[i][j] = 1 / (i + j + 3).
//
// The sponge keeps the capacity element at state[0] and absorbs two field
// elements per permutation into state[1], state[2]. Output is state[1].
namespace anonkey::poseidon {

inline constexpr size_t kWidth = 3;
inline constexpr size_t kRate = 2;
inline constexpr size_t kFullRounds = 8;
inline constexpr size_t kPartialRounds = 57;
inline constexpr size_t kRounds = kFullRounds + kPartialRounds;

using State = std::array<Fr, kWidth>;

struct Params {
  // kRounds * kWidth constants, round-major.
  std::vector<Fr> round_constants;
  std::array<std::array<Fr, kWidth>, kWidth> mds;
};

const Params& DefaultParams();

inline bool IsFullRound(size_t round) {
  return round < kFullRounds / 2 || round >= kFullRounds / 2 + kPartialRounds;
}

void Permute(State& state);

// Splits bytes into 31-byte big-endian chunks; the final chunk may be
// shorter and is read as a left-padded integer.
std::vector<Fr> PackBytes(ByteSpan data);

// Initial capacity element for hashing `byte_len` bytes: 2^64 + byte_len.
Fr ByteDomainTag(size_t byte_len);
// Initial capacity element for two-to-one node compression.
Fr NodeDomainTag();

// Sponge over the packed bytes; the input length is bound via the capacity.
Fr HashBytes(ByteSpan data);
// Sponge over an already packed element list under a given capacity tag.
Fr HashElements(const Fr& domain_tag, std::span<const Fr> elements);
Fr HashNode(const Fr& left, const Fr& right);

}  // namespace anonkey::poseidon

#endif  // ANONKEY_CORE_POSEIDON_H_
