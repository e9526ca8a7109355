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

#include "anonkey/zkp/r1cs.h"

#include <openssl/evp.h>

#include <algorithm>
#include <memory>

#include "anonkey/core/errors.h"

namespace anonkey::zkp {

LinearCombination LinearCombination::Constant(const Fr& c) {
  LinearCombination lc;
  if (!c.IsZero()) lc.terms_.push_back({kOneVar, c});
  return lc;
}

LinearCombination& LinearCombination::Add(Var v, const Fr& coeff) {
  if (!coeff.IsZero()) terms_.push_back({v, coeff});
  return *this;
}

LinearCombination& LinearCombination::operator+=(const LinearCombination& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  Normalize();
  return *this;
}

LinearCombination& LinearCombination::operator-=(const LinearCombination& o) {
  for (const auto& [v, c] : o.terms_) terms_.push_back({v, -c});
  Normalize();
  return *this;
}

LinearCombination LinearCombination::operator+(
    const LinearCombination& o) const {
  LinearCombination out = *this;
  out += o;
  return out;
}

LinearCombination LinearCombination::operator-(
    const LinearCombination& o) const {
  LinearCombination out = *this;
  out -= o;
  return out;
}

LinearCombination LinearCombination::operator*(const Fr& k) const {
  LinearCombination out;
  if (k.IsZero()) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& [v, c] : terms_) out.terms_.push_back({v, c * k});
  return out;
}

void LinearCombination::Normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<Var, Fr>> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first) {
      merged.back().second += t.second;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const auto& t) { return t.second.IsZero(); });
  terms_ = std::move(merged);
}

Fr LinearCombination::Evaluate(std::span<const Fr> assignment) const {
  Fr acc;
  for (const auto& [v, c] : terms_) acc += c * assignment[v];
  return acc;
}

std::string_view ClauseName(Clause c) {
  switch (c) {
    case Clause::kWellFormed:
      return "well-formed-witness";
    case Clause::kCommitment:
      return "commitment";
    case Clause::kNullifier:
      return "nullifier";
    case Clause::kMembership:
      return "membership";
    case Clause::kInternal:
      return "internal";
  }
  return "unknown";
}

Var ConstraintSystem::AllocPublic(const Fr& value) {
  if (private_started_) {
    throw PreconditionError("public inputs must precede private variables");
  }
  values_.push_back(with_values_ ? value : Fr());
  ++num_public_;
  return static_cast<Var>(values_.size() - 1);
}

Var ConstraintSystem::AllocPrivate(const Fr& value) {
  private_started_ = true;
  values_.push_back(with_values_ ? value : Fr());
  return static_cast<Var>(values_.size() - 1);
}

void ConstraintSystem::Enforce(LinearCombination a, LinearCombination b,
                               LinearCombination c, Clause clause) {
  a.Normalize();
  b.Normalize();
  c.Normalize();
  constraints_.push_back({std::move(a), std::move(b), std::move(c), clause});
}

void ConstraintSystem::EnforceEqual(LinearCombination x, LinearCombination y,
                                    Clause clause) {
  Enforce(x - y, LinearCombination(kOneVar), LinearCombination(), clause);
}

void ConstraintSystem::EnforceBoolean(Var v, Clause clause) {
  Enforce(LinearCombination(v), LinearCombination(v), LinearCombination(v),
          clause);
}

std::optional<size_t> ConstraintSystem::FirstUnsatisfied() const {
  for (size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& k = constraints_[i];
    if (k.a.Evaluate(values_) * k.b.Evaluate(values_) !=
        k.c.Evaluate(values_)) {
      return i;
    }
  }
  return std::nullopt;
}

Digest ConstraintSystem::ShapeDigest() const {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  Bytes header;
  AppendU64BE(header, values_.size());
  AppendU64BE(header, num_public_);
  AppendU64BE(header, constraints_.size());
  EVP_DigestUpdate(ctx.get(), header.data(), header.size());
  auto absorb = [&](const LinearCombination& lc) {
    Bytes buf;
    AppendU32BE(buf, static_cast<uint32_t>(lc.terms().size()));
    for (const auto& [v, c] : lc.terms()) {
      AppendU32BE(buf, v);
      Append(buf, c.ToBytesBE());
    }
    EVP_DigestUpdate(ctx.get(), buf.data(), buf.size());
  };
  for (const Constraint& k : constraints_) {
    absorb(k.a);
    absorb(k.b);
    absorb(k.c);
  }
  Digest d;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), d.bytes.data(), &len);
  return d;
}

}  // namespace anonkey::zkp
