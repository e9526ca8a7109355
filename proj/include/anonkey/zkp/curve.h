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

#ifndef ANONKEY_ZKP_CURVE_H_
#define ANONKEY_ZKP_CURVE_H_

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "anonkey/core/bytes.h"
#include "anonkey/core/field.h"
#include "blst.h"

// BLS12-381 group wrappers over blst. Points are held in projective form;
// affine arrays are used for multi-scalar multiplication and storage.
namespace anonkey::zkp {

class G1 {
 public:
  static constexpr size_t kCompressedBytes = 48;
  static constexpr size_t kSerializedBytes = 96;

  G1() : p_{} {}
  explicit G1(const blst_p1& p) : p_(p) {}
  explicit G1(const blst_p1_affine& a) { blst_p1_from_affine(&p_, &a); }

  static G1 Identity() { return G1(); }
  static G1 Generator();

  G1 operator+(const G1& o) const;
  G1 operator-(const G1& o) const;
  G1 operator-() const;
  G1& operator+=(const G1& o);
  G1 operator*(const Fr& k) const;
  friend bool operator==(const G1& a, const G1& b);

  bool IsIdentity() const;
  blst_p1_affine ToAffine() const;
  const blst_p1& raw() const { return p_; }

  std::array<uint8_t, kCompressedBytes> Compress() const;
  // Rejects encodings off the curve or outside the prime-order subgroup.
  static std::optional<G1> Decompress(ByteSpan in);
  std::array<uint8_t, kSerializedBytes> Serialize() const;
  static std::optional<G1> Deserialize(ByteSpan in, bool check_subgroup);

 private:
  blst_p1 p_;
};

class G2 {
 public:
  static constexpr size_t kCompressedBytes = 96;
  static constexpr size_t kSerializedBytes = 192;

  G2() : p_{} {}
  explicit G2(const blst_p2& p) : p_(p) {}
  explicit G2(const blst_p2_affine& a) { blst_p2_from_affine(&p_, &a); }

  static G2 Identity() { return G2(); }
  static G2 Generator();

  G2 operator+(const G2& o) const;
  G2 operator-() const;
  G2& operator+=(const G2& o);
  G2 operator*(const Fr& k) const;
  friend bool operator==(const G2& a, const G2& b);

  bool IsIdentity() const;
  blst_p2_affine ToAffine() const;
  const blst_p2& raw() const { return p_; }

  std::array<uint8_t, kCompressedBytes> Compress() const;
  static std::optional<G2> Decompress(ByteSpan in);
  std::array<uint8_t, kSerializedBytes> Serialize() const;
  static std::optional<G2> Deserialize(ByteSpan in, bool check_subgroup);

 private:
  blst_p2 p_;
};

std::vector<blst_p1_affine> ToAffine(std::span<const G1> points);
std::vector<blst_p2_affine> ToAffine(std::span<const G2> points);

// sum_i scalars[i] * points[i]. Zero scalars and points at infinity are
// skipped.
G1 MultiExp(std::span<const blst_p1_affine> points, std::span<const Fr> scalars);
G2 MultiExp(std::span<const blst_p2_affine> points, std::span<const Fr> scalars);

// Windowed table for repeated multiplication of one base point.
class G1FixedBase {
 public:
  explicit G1FixedBase(const G1& base);
  G1 Mul(const Fr& k) const;
  // Multiplies every scalar and returns affine results.
  std::vector<blst_p1_affine> BatchMul(std::span<const Fr> scalars) const;

 private:
  std::vector<blst_p1_affine> table_;
};

class G2FixedBase {
 public:
  explicit G2FixedBase(const G2& base);
  G2 Mul(const Fr& k) const;
  std::vector<blst_p2_affine> BatchMul(std::span<const Fr> scalars) const;

 private:
  std::vector<blst_p2_affine> table_;
};

// Target-group element (result of the pairing after final exponentiation).
struct Gt {
  blst_fp12 v;
  friend bool operator==(const Gt& a, const Gt& b);
};

Gt Pairing(const G1& p, const G2& q);
Gt GtMul(const Gt& a, const Gt& b);

// prod_i e(p_i, q_i) computed with one final exponentiation.
Gt MultiPairing(std::span<const G1> ps, std::span<const G2> qs);

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_CURVE_H_
