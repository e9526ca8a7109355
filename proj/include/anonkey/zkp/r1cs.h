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

#ifndef ANONKEY_ZKP_R1CS_H_
#define ANONKEY_ZKP_R1CS_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "anonkey/core/digest.h"
#include "anonkey/core/field.h"

namespace anonkey::zkp {

using Var = uint32_t;

// Variable 0 is the constant one. Public inputs follow, then private ones.
inline constexpr Var kOneVar = 0;

class LinearCombination {
 public:
  LinearCombination() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  LinearCombination(Var v) { terms_.push_back({v, Fr::One()}); }
  static LinearCombination Constant(const Fr& c);

  LinearCombination& Add(Var v, const Fr& coeff);
  LinearCombination& operator+=(const LinearCombination& o);
  LinearCombination& operator-=(const LinearCombination& o);
  LinearCombination operator+(const LinearCombination& o) const;
  LinearCombination operator-(const LinearCombination& o) const;
  LinearCombination operator*(const Fr& k) const;
  LinearCombination& AddConstant(const Fr& c) { return Add(kOneVar, c); }

  // Sorts by variable and merges duplicates, dropping zero coefficients.
  void Normalize();

  Fr Evaluate(std::span<const Fr> assignment) const;
  const std::vector<std::pair<Var, Fr>>& terms() const { return terms_; }

 private:
  std::vector<std::pair<Var, Fr>> terms_;
};

// Which part of the relation a constraint enforces. Used to name the clause
// a bad witness violates.
enum class Clause : uint8_t {
  kWellFormed = 0,  // booleanity and range of witness encodings
  kCommitment = 1,
  kNullifier = 2,
  kMembership = 3,
  kInternal = 4,  // hash internals; cannot fail for values computed here
};

std::string_view ClauseName(Clause c);

struct Constraint {
  LinearCombination a, b, c;
  Clause clause;
};

// Rank-1 constraint system plus an assignment. In shape-only mode (used by
// setup) variable values are all zero and satisfaction is not meaningful.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(bool with_values) : with_values_(with_values) {
    values_.push_back(Fr::One());
  }

  bool with_values() const { return with_values_; }

  // Public inputs must all be allocated before the first private variable.
  Var AllocPublic(const Fr& value);
  Var AllocPrivate(const Fr& value);

  void Enforce(LinearCombination a, LinearCombination b, LinearCombination c,
               Clause clause);
  void EnforceEqual(LinearCombination x, LinearCombination y, Clause clause);
  void EnforceBoolean(Var v, Clause clause);

  Fr Value(const LinearCombination& lc) const { return lc.Evaluate(values_); }
  const Fr& Value(Var v) const { return values_[v]; }

  size_t num_variables() const { return values_.size(); }
  // Public inputs, not counting the constant-one variable.
  size_t num_public() const { return num_public_; }
  size_t num_constraints() const { return constraints_.size(); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Fr>& assignment() const { return values_; }

  // Index of the first constraint the assignment violates, if any.
  std::optional<size_t> FirstUnsatisfied() const;

  // SHA-256 over the matrices, independent of the assignment.
  Digest ShapeDigest() const;

 private:
  bool with_values_;
  bool private_started_ = false;
  size_t num_public_ = 0;
  std::vector<Fr> values_;
  std::vector<Constraint> constraints_;
};

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_R1CS_H_
