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

#ifndef ANONKEY_CORE_FIELD_H_
#define ANONKEY_CORE_FIELD_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "anonkey/core/bytes.h"
#include "blst.h"

namespace anonkey {

// Element of the BLS12-381 scalar field (r ~ 2^255), held in Montgomery form.
// This is the native field of both the algebraic hash profile and the
// constraint system.
class Fr {
 public:
  static constexpr size_t kBytes = 32;
  // Largest whole number of bytes that always fits below the modulus.
  static constexpr size_t kPackedBytes = 31;
  static constexpr size_t kBits = 255;

  Fr() : v_{} {}

  static Fr Zero() { return Fr(); }
  static Fr One();
  static Fr FromU64(uint64_t x);
  // Canonical big-endian decoding; nullopt when the value is >= r.
  static std::optional<Fr> FromBytesBE(ByteSpan be32);
  // Interprets an arbitrary-length big-endian integer and reduces it mod r.
  static Fr FromBytesReduced(ByteSpan be);
  // 2^k for k < 256.
  static Fr PowerOfTwo(unsigned k);

  std::array<uint8_t, kBytes> ToBytesBE() const;
  // Little-endian canonical scalar, the layout blst expects for
  // multi-scalar multiplication.
  blst_scalar ToScalar() const;
  std::string ToHex() const;

  bool IsZero() const;
  bool IsOne() const;

  Fr operator+(const Fr& o) const;
  Fr operator-(const Fr& o) const;
  Fr operator*(const Fr& o) const;
  Fr operator-() const;
  Fr& operator+=(const Fr& o);
  Fr& operator-=(const Fr& o);
  Fr& operator*=(const Fr& o);

  Fr Square() const;
  // Inverse of zero is zero.
  Fr Inverse() const;
  Fr Pow(uint64_t e) const;
  // Exponent given as a big-endian byte string.
  Fr Pow(ByteSpan exponent_be) const;

  friend bool operator==(const Fr& a, const Fr& b);

  const blst_fr& raw() const { return v_; }

 private:
  blst_fr v_;
};

// Replaces every element with its inverse using one field inversion. Zero
// entries are left as zero.
void BatchInvert(std::span<Fr> values);

// r - 1 as a big-endian byte string, for exponent arithmetic.
const std::array<uint8_t, 32>& ScalarModulusMinusOne();

}  // namespace anonkey

#endif  // ANONKEY_CORE_FIELD_H_
