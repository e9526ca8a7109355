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

#include "anonkey/core/poseidon.h"

#include <string_view>

#include "anonkey/core/hash.h"

namespace anonkey::poseidon {
namespace {

constexpr std::string_view kConstantsLabel = "anonkey/poseidon/bls12-381/t3/rc";

Params BuildParams() {
  Params p;
  p.round_constants.reserve(kRounds * kWidth);
  for (uint32_t i = 0; i < kRounds * kWidth; ++i) {
    Bytes input(kConstantsLabel.begin(), kConstantsLabel.end());
    AppendU32BE(input, i);
    Digest d = Sha256(input);
    p.round_constants.push_back(Fr::FromBytesReduced(d.bytes));
  }
  for (size_t i = 0; i < kWidth; ++i) {
    for (size_t j = 0; j < kWidth; ++j) {
      p.mds[i][j] = Fr::FromU64(i + j + kWidth).Inverse();
    }
  }
  return p;
}

inline Fr Pow5(const Fr& x) {
  Fr x2 = x.Square();
  Fr x4 = x2.Square();
  return x4 * x;
}

}  // namespace

const Params& DefaultParams() {
  static const Params params = BuildParams();
  return params;
}

void Permute(State& state) {
  const Params& p = DefaultParams();
  for (size_t round = 0; round < kRounds; ++round) {
    for (size_t i = 0; i < kWidth; ++i) {
      state[i] += p.round_constants[round * kWidth + i];
    }
    if (IsFullRound(round)) {
      for (auto& s : state) s = Pow5(s);
    } else {
      state[0] = Pow5(state[0]);
    }
    State mixed;
    for (size_t i = 0; i < kWidth; ++i) {
      Fr acc = p.mds[i][0] * state[0];
      for (size_t j = 1; j < kWidth; ++j) acc += p.mds[i][j] * state[j];
      mixed[i] = acc;
    }
    state = mixed;
  }
}

std::vector<Fr> PackBytes(ByteSpan data) {
  std::vector<Fr> out;
  out.reserve((data.size() + Fr::kPackedBytes - 1) / Fr::kPackedBytes);
  for (size_t off = 0; off < data.size(); off += Fr::kPackedBytes) {
    const size_t n = std::min(Fr::kPackedBytes, data.size() - off);
    out.push_back(Fr::FromBytesReduced(data.subspan(off, n)));
  }
  return out;
}

Fr ByteDomainTag(size_t byte_len) {
  return Fr::PowerOfTwo(64) + Fr::FromU64(byte_len);
}

Fr NodeDomainTag() { return Fr::FromU64(2); }

Fr HashElements(const Fr& domain_tag, std::span<const Fr> elements) {
  State state = {domain_tag, Fr::Zero(), Fr::Zero()};
  if (elements.empty()) {
    Permute(state);
    return state[1];
  }
  for (size_t i = 0; i < elements.size(); i += kRate) {
    state[1] += elements[i];
    if (i + 1 < elements.size()) state[2] += elements[i + 1];
    Permute(state);
  }
  return state[1];
}

Fr HashBytes(ByteSpan data) {
  return HashElements(ByteDomainTag(data.size()), PackBytes(data));
}

Fr HashNode(const Fr& left, const Fr& right) {
  const Fr elements[2] = {left, right};
  return HashElements(NodeDomainTag(), elements);
}

}  // namespace anonkey::poseidon
