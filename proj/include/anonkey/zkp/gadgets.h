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

#ifndef ANONKEY_ZKP_GADGETS_H_
#define ANONKEY_ZKP_GADGETS_H_

#include <array>
#include <optional>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/zkp/r1cs.h"

// Circuit building blocks. Byte strings are carried as bit vectors, eight
// bits per byte, most significant bit first.
namespace anonkey::zkp::gadgets {

using Bits = std::vector<LinearCombination>;

// Constant value of `lc` if it only references the one-variable.
std::optional<Fr> ConstantValue(const LinearCombination& lc);

// Allocates 8 * len boolean private variables holding `bytes` (ignored in
// shape-only mode, where `bytes` may be empty).
Bits AllocBytes(ConstraintSystem& cs, ByteSpan bytes, size_t len,
                Clause clause);
Bits ConstantBytes(ByteSpan bytes);
Bits Concat(const Bits& a, const Bits& b);

// Integer value of a big-endian bit string as a single linear combination.
// At most 253 bits, so the packing is injective.
LinearCombination PackBits(std::span<const LinearCombination> bits);

// Allocates a variable equal to `x` and returns it as a linear combination.
LinearCombination Materialize(ConstraintSystem& cs, const LinearCombination& x,
                              Clause clause);

// Conditional swap driven by boolean `bit`: returns (x, y) when bit = 0 and
// (y, x) when bit = 1. One constraint.
std::pair<LinearCombination, LinearCombination> CondSwap(
    ConstraintSystem& cs, const LinearCombination& bit,
    const LinearCombination& x, const LinearCombination& y, Clause clause);

// Poseidon permutation on a width-3 state of linear combinations. Three
// constraints per non-constant S-box input.
void PoseidonPermute(ConstraintSystem& cs,
                     std::array<LinearCombination, 3>& state, Clause clause);

// In-circuit counterparts of poseidon::HashBytes / poseidon::HashNode.
LinearCombination PoseidonHashBits(ConstraintSystem& cs, const Bits& bits,
                                   Clause clause);
LinearCombination PoseidonHashNode(ConstraintSystem& cs,
                                   const LinearCombination& left,
                                   const LinearCombination& right,
                                   Clause clause);

}  // namespace anonkey::zkp::gadgets

#endif  // ANONKEY_ZKP_GADGETS_H_
