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

#ifndef ANONKEY_ZKP_SHA256_GADGET_H_
#define ANONKEY_ZKP_SHA256_GADGET_H_

#include <vector>

#include "anonkey/zkp/r1cs.h"

namespace anonkey::zkp {

// Each tree level costs two SHA-256 compressions (~46k constraints), so the
// sha256 profile circuit is limited to shallow trees.
inline constexpr unsigned kMaxSha256CircuitDepth = 8;

// SHA-256 of a byte-aligned message given as bits (most significant bit of
// each byte first). The message length is fixed by the circuit shape.
// Returns the 256 digest bits in the same order. Constant inputs are folded,
// so no constraints are spent on known padding or initial values.
std::vector<LinearCombination> Sha256Gadget(
    ConstraintSystem& cs, const std::vector<LinearCombination>& message,
    Clause clause);

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_SHA256_GADGET_H_
