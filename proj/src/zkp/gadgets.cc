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

#include "anonkey/zkp/gadgets.h"

#include "anonkey/core/errors.h"
#include "anonkey/core/poseidon.h"

namespace anonkey::zkp::gadgets {

std::optional<Fr> ConstantValue(const LinearCombination& lc) {
  Fr c;
  for (const auto& [v, k] : lc.terms()) {
    if (v != kOneVar) return std::nullopt;
    c += k;
  }
  return c;
}

Bits AllocBytes(ConstraintSystem& cs, ByteSpan bytes, size_t len,
                Clause clause) {
  if (cs.with_values() && bytes.size() != len) {
    throw PreconditionError("byte witness has the wrong length");
  }
  Bits bits;
  bits.reserve(len * 8);
  for (size_t i = 0; i < len; ++i) {
    const uint8_t byte = cs.with_values() ? bytes[i] : 0;
    for (int b = 7; b >= 0; --b) {
      const Var v = cs.AllocPrivate(Fr::FromU64((byte >> b) & 1));
      cs.EnforceBoolean(v, clause);
      bits.emplace_back(v);
    }
  }
  return bits;
}

Bits ConstantBytes(ByteSpan bytes) {
  Bits bits;
  bits.reserve(bytes.size() * 8);
  for (uint8_t byte : bytes) {
    for (int b = 7; b >= 0; --b) {
      bits.push_back(LinearCombination::Constant(Fr::FromU64((byte >> b) & 1)));
    }
  }
  return bits;
}

Bits Concat(const Bits& a, const Bits& b) {
  Bits out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

LinearCombination PackBits(std::span<const LinearCombination> bits) {
  if (bits.size() > 253) throw PreconditionError("too many bits to pack");
  LinearCombination out;
  const size_t n = bits.size();
  for (size_t i = 0; i < n; ++i) {
    const Fr weight = Fr::PowerOfTwo(static_cast<unsigned>(n - 1 - i));
    for (const auto& [v, c] : bits[i].terms()) out.Add(v, c * weight);
  }
  out.Normalize();
  return out;
}

LinearCombination Materialize(ConstraintSystem& cs, const LinearCombination& x,
                              Clause clause) {
  const Var v = cs.AllocPrivate(cs.Value(x));
  cs.EnforceEqual(LinearCombination(v), x, clause);
  return LinearCombination(v);
}

std::pair<LinearCombination, LinearCombination> CondSwap(
    ConstraintSystem& cs, const LinearCombination& bit,
    const LinearCombination& x, const LinearCombination& y, Clause clause) {
  // t = bit * (y - x); left = x + t; right = y - t.
  const LinearCombination diff = y - x;
  const Var t = cs.AllocPrivate(cs.Value(bit) * cs.Value(diff));
  cs.Enforce(bit, diff, LinearCombination(t), clause);
  return {x + LinearCombination(t), y - LinearCombination(t)};
}

namespace {

LinearCombination SBox(ConstraintSystem& cs, const LinearCombination& x,
                       Clause clause) {
  if (auto c = ConstantValue(x)) {
    return LinearCombination::Constant(c->Square().Square() * *c);
  }
  const Fr xv = cs.Value(x);
  const Fr x2v = xv.Square();
  const Fr x4v = x2v.Square();
  const Var x2 = cs.AllocPrivate(x2v);
  cs.Enforce(x, x, LinearCombination(x2), clause);
  const Var x4 = cs.AllocPrivate(x4v);
  cs.Enforce(LinearCombination(x2), LinearCombination(x2),
             LinearCombination(x4), clause);
  const Var x5 = cs.AllocPrivate(x4v * xv);
  cs.Enforce(LinearCombination(x4), x, LinearCombination(x5), clause);
  return LinearCombination(x5);
}

}  // namespace

void PoseidonPermute(ConstraintSystem& cs,
                     std::array<LinearCombination, 3>& state, Clause clause) {
  const poseidon::Params& p = poseidon::DefaultParams();
  for (size_t round = 0; round < poseidon::kRounds; ++round) {
    for (size_t i = 0; i < 3; ++i) {
      state[i].AddConstant(p.round_constants[round * 3 + i]);
      state[i].Normalize();
    }
    if (poseidon::IsFullRound(round)) {
      for (auto& s : state) s = SBox(cs, s, clause);
    } else {
      state[0] = SBox(cs, state[0], clause);
    }
    std::array<LinearCombination, 3> mixed;
    for (size_t i = 0; i < 3; ++i) {
      LinearCombination acc;
      for (size_t j = 0; j < 3; ++j) acc += state[j] * p.mds[i][j];
      mixed[i] = std::move(acc);
    }
    state = std::move(mixed);
  }
}

LinearCombination PoseidonHashBits(ConstraintSystem& cs, const Bits& bits,
                                   Clause clause) {
  if (bits.size() % 8 != 0) throw PreconditionError("bits not byte aligned");
  const size_t byte_len = bits.size() / 8;
  std::vector<LinearCombination> elements;
  const size_t chunk_bits = Fr::kPackedBytes * 8;
  for (size_t off = 0; off < bits.size(); off += chunk_bits) {
    const size_t n = std::min(chunk_bits, bits.size() - off);
    elements.push_back(
        PackBits(std::span<const LinearCombination>(bits).subspan(off, n)));
  }
  std::array<LinearCombination, 3> state = {
      LinearCombination::Constant(poseidon::ByteDomainTag(byte_len)),
      LinearCombination(), LinearCombination()};
  if (elements.empty()) {
    PoseidonPermute(cs, state, clause);
    return state[1];
  }
  for (size_t i = 0; i < elements.size(); i += 2) {
    state[1] += elements[i];
    if (i + 1 < elements.size()) state[2] += elements[i + 1];
    PoseidonPermute(cs, state, clause);
  }
  return state[1];
}

LinearCombination PoseidonHashNode(ConstraintSystem& cs,
                                   const LinearCombination& left,
                                   const LinearCombination& right,
                                   Clause clause) {
  std::array<LinearCombination, 3> state = {
      LinearCombination::Constant(poseidon::NodeDomainTag()), left, right};
  PoseidonPermute(cs, state, clause);
  return state[1];
}

}  // namespace anonkey::zkp::gadgets
