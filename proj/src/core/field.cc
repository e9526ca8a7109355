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

#include "anonkey/core/field.h"

#include <cstring>
#include <vector>

#include "anonkey/core/errors.h"

namespace anonkey {
namespace {

// r - 1, big-endian.
constexpr std::array<uint8_t, 32> kModulusMinusOne = {
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8,
    0x08, 0x09, 0xa1, 0xd8, 0x05, 0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe,
    0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x00};

}  // namespace

const std::array<uint8_t, 32>& ScalarModulusMinusOne() {
  return kModulusMinusOne;
}

Fr Fr::One() { return FromU64(1); }

Fr Fr::FromU64(uint64_t x) {
  const uint64_t limbs[4] = {x, 0, 0, 0};
  Fr out;
  blst_fr_from_uint64(&out.v_, limbs);
  return out;
}

std::optional<Fr> Fr::FromBytesBE(ByteSpan be32) {
  if (be32.size() != kBytes) return std::nullopt;
  blst_scalar s;
  blst_scalar_from_bendian(&s, be32.data());
  if (!blst_scalar_fr_check(&s)) return std::nullopt;
  Fr out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Fr Fr::FromBytesReduced(ByteSpan be) {
  // blst_scalar_from_be_bytes reduces arbitrary-length input mod r.
  blst_scalar s;
  if (be.empty()) return Fr();
  blst_scalar_from_be_bytes(&s, be.data(), be.size());
  Fr out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Fr Fr::PowerOfTwo(unsigned k) {
  if (k >= 256) throw PreconditionError("PowerOfTwo exponent out of range");
  std::array<uint8_t, 32> be{};
  be[31 - k / 8] = static_cast<uint8_t>(1u << (k % 8));
  return FromBytesReduced(be);
}

std::array<uint8_t, Fr::kBytes> Fr::ToBytesBE() const {
  blst_scalar s;
  blst_scalar_from_fr(&s, &v_);
  std::array<uint8_t, kBytes> out;
  blst_bendian_from_scalar(out.data(), &s);
  return out;
}

blst_scalar Fr::ToScalar() const {
  blst_scalar s;
  blst_scalar_from_fr(&s, &v_);
  return s;
}

std::string Fr::ToHex() const { return anonkey::ToHex(ToBytesBE()); }

bool Fr::IsZero() const {
  for (auto l : v_.l) {
    if (l != 0) return false;
  }
  return true;
}

bool Fr::IsOne() const { return *this == One(); }

Fr Fr::operator+(const Fr& o) const {
  Fr out;
  blst_fr_add(&out.v_, &v_, &o.v_);
  return out;
}

Fr Fr::operator-(const Fr& o) const {
  Fr out;
  blst_fr_sub(&out.v_, &v_, &o.v_);
  return out;
}

Fr Fr::operator*(const Fr& o) const {
  Fr out;
  blst_fr_mul(&out.v_, &v_, &o.v_);
  return out;
}

Fr Fr::operator-() const {
  Fr out;
  blst_fr_cneg(&out.v_, &v_, true);
  return out;
}

Fr& Fr::operator+=(const Fr& o) {
  blst_fr_add(&v_, &v_, &o.v_);
  return *this;
}

Fr& Fr::operator-=(const Fr& o) {
  blst_fr_sub(&v_, &v_, &o.v_);
  return *this;
}

Fr& Fr::operator*=(const Fr& o) {
  blst_fr_mul(&v_, &v_, &o.v_);
  return *this;
}

Fr Fr::Square() const {
  Fr out;
  blst_fr_sqr(&out.v_, &v_);
  return out;
}

Fr Fr::Inverse() const {
  Fr out;
  if (IsZero()) return out;
  blst_fr_eucl_inverse(&out.v_, &v_);
  return out;
}

Fr Fr::Pow(uint64_t e) const {
  Fr result = One();
  Fr base = *this;
  while (e != 0) {
    if (e & 1) result *= base;
    base = base.Square();
    e >>= 1;
  }
  return result;
}

Fr Fr::Pow(ByteSpan exponent_be) const {
  Fr result = One();
  for (uint8_t byte : exponent_be) {
    for (int bit = 7; bit >= 0; --bit) {
      result = result.Square();
      if ((byte >> bit) & 1) result *= *this;
    }
  }
  return result;
}

bool operator==(const Fr& a, const Fr& b) {
  return std::memcmp(a.v_.l, b.v_.l, sizeof(a.v_.l)) == 0;
}

void BatchInvert(std::span<Fr> values) {
  std::vector<Fr> prefix(values.size());
  Fr acc = Fr::One();
  for (size_t i = 0; i < values.size(); ++i) {
    prefix[i] = acc;
    if (!values[i].IsZero()) acc *= values[i];
  }
  Fr inv = acc.Inverse();
  for (size_t i = values.size(); i-- > 0;) {
    if (values[i].IsZero()) continue;
    Fr original = values[i];
    values[i] = inv * prefix[i];
    inv *= original;
  }
}

}  // namespace anonkey
