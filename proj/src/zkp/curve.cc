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

#include "anonkey/zkp/curve.h"

#include <memory>

#include "anonkey/core/errors.h"

namespace anonkey::zkp {
namespace {

constexpr size_t kWindowBits = 8;
constexpr size_t kWindows = 32;
constexpr size_t kWindowSize = 1u << kWindowBits;

}  // namespace

G1 G1::Generator() { return G1(*blst_p1_generator()); }

G1 G1::operator+(const G1& o) const {
  G1 out;
  blst_p1_add_or_double(&out.p_, &p_, &o.p_);
  return out;
}

G1 G1::operator-() const {
  G1 out = *this;
  blst_p1_cneg(&out.p_, true);
  return out;
}

G1 G1::operator-(const G1& o) const { return *this + (-o); }

G1& G1::operator+=(const G1& o) {
  blst_p1_add_or_double(&p_, &p_, &o.p_);
  return *this;
}

G1 G1::operator*(const Fr& k) const {
  blst_scalar s = k.ToScalar();
  G1 out;
  blst_p1_mult(&out.p_, &p_, s.b, 255);
  return out;
}

bool operator==(const G1& a, const G1& b) {
  return blst_p1_is_equal(&a.p_, &b.p_);
}

bool G1::IsIdentity() const { return blst_p1_is_inf(&p_); }

blst_p1_affine G1::ToAffine() const {
  blst_p1_affine a;
  blst_p1_to_affine(&a, &p_);
  return a;
}

std::array<uint8_t, G1::kCompressedBytes> G1::Compress() const {
  std::array<uint8_t, kCompressedBytes> out;
  blst_p1_compress(out.data(), &p_);
  return out;
}

std::optional<G1> G1::Decompress(ByteSpan in) {
  if (in.size() != kCompressedBytes) return std::nullopt;
  blst_p1_affine a;
  if (blst_p1_uncompress(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
  if (!blst_p1_affine_in_g1(&a)) return std::nullopt;
  return G1(a);
}

std::array<uint8_t, G1::kSerializedBytes> G1::Serialize() const {
  std::array<uint8_t, kSerializedBytes> out;
  blst_p1_serialize(out.data(), &p_);
  return out;
}

std::optional<G1> G1::Deserialize(ByteSpan in, bool check_subgroup) {
  if (in.size() != kSerializedBytes) return std::nullopt;
  blst_p1_affine a;
  if (blst_p1_deserialize(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
  if (check_subgroup && !blst_p1_affine_in_g1(&a)) return std::nullopt;
  return G1(a);
}

G2 G2::Generator() { return G2(*blst_p2_generator()); }

G2 G2::operator+(const G2& o) const {
  G2 out;
  blst_p2_add_or_double(&out.p_, &p_, &o.p_);
  return out;
}

G2 G2::operator-() const {
  G2 out = *this;
  blst_p2_cneg(&out.p_, true);
  return out;
}

G2& G2::operator+=(const G2& o) {
  blst_p2_add_or_double(&p_, &p_, &o.p_);
  return *this;
}

G2 G2::operator*(const Fr& k) const {
  blst_scalar s = k.ToScalar();
  G2 out;
  blst_p2_mult(&out.p_, &p_, s.b, 255);
  return out;
}

bool operator==(const G2& a, const G2& b) {
  return blst_p2_is_equal(&a.p_, &b.p_);
}

bool G2::IsIdentity() const { return blst_p2_is_inf(&p_); }

blst_p2_affine G2::ToAffine() const {
  blst_p2_affine a;
  blst_p2_to_affine(&a, &p_);
  return a;
}

std::array<uint8_t, G2::kCompressedBytes> G2::Compress() const {
  std::array<uint8_t, kCompressedBytes> out;
  blst_p2_compress(out.data(), &p_);
  return out;
}

std::optional<G2> G2::Decompress(ByteSpan in) {
  if (in.size() != kCompressedBytes) return std::nullopt;
  blst_p2_affine a;
  if (blst_p2_uncompress(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
  if (!blst_p2_affine_in_g2(&a)) return std::nullopt;
  return G2(a);
}

std::array<uint8_t, G2::kSerializedBytes> G2::Serialize() const {
  std::array<uint8_t, kSerializedBytes> out;
  blst_p2_serialize(out.data(), &p_);
  return out;
}

std::optional<G2> G2::Deserialize(ByteSpan in, bool check_subgroup) {
  if (in.size() != kSerializedBytes) return std::nullopt;
  blst_p2_affine a;
  if (blst_p2_deserialize(&a, in.data()) != BLST_SUCCESS) return std::nullopt;
  if (check_subgroup && !blst_p2_affine_in_g2(&a)) return std::nullopt;
  return G2(a);
}

std::vector<blst_p1_affine> ToAffine(std::span<const G1> points) {
  std::vector<blst_p1_affine> out(points.size());
  if (points.empty()) return out;
  std::vector<const blst_p1*> ptrs(points.size());
  for (size_t i = 0; i < points.size(); ++i) ptrs[i] = &points[i].raw();
  blst_p1s_to_affine(out.data(), ptrs.data(), points.size());
  return out;
}

std::vector<blst_p2_affine> ToAffine(std::span<const G2> points) {
  std::vector<blst_p2_affine> out(points.size());
  if (points.empty()) return out;
  std::vector<const blst_p2*> ptrs(points.size());
  for (size_t i = 0; i < points.size(); ++i) ptrs[i] = &points[i].raw();
  blst_p2s_to_affine(out.data(), ptrs.data(), points.size());
  return out;
}

G1 MultiExp(std::span<const blst_p1_affine> points,
            std::span<const Fr> scalars) {
  if (points.size() != scalars.size()) {
    throw PreconditionError("MultiExp size mismatch");
  }
  std::vector<blst_p1_affine> pts;
  std::vector<blst_scalar> ks;
  pts.reserve(points.size());
  ks.reserve(points.size());
  blst_p1 acc{};
  for (size_t i = 0; i < points.size(); ++i) {
    if (scalars[i].IsZero() || blst_p1_affine_is_inf(&points[i])) continue;
    if (scalars[i].IsOne()) {
      blst_p1_add_or_double_affine(&acc, &acc, &points[i]);
      continue;
    }
    pts.push_back(points[i]);
    ks.push_back(scalars[i].ToScalar());
  }
  if (pts.size() == 1) {
    blst_p1 base, out;
    blst_p1_from_affine(&base, &pts[0]);
    blst_p1_mult(&out, &base, ks[0].b, 255);
    blst_p1_add_or_double(&acc, &acc, &out);
  } else if (pts.size() > 1) {
    const blst_p1_affine* pp[2] = {pts.data(), nullptr};
    const uint8_t* sp[2] = {ks[0].b, nullptr};
    std::vector<limb_t> scratch(
        blst_p1s_mult_pippenger_scratch_sizeof(pts.size()) / sizeof(limb_t));
    blst_p1 out;
    blst_p1s_mult_pippenger(&out, pp, pts.size(), sp, 255, scratch.data());
    blst_p1_add_or_double(&acc, &acc, &out);
  }
  return G1(acc);
}

G2 MultiExp(std::span<const blst_p2_affine> points,
            std::span<const Fr> scalars) {
  if (points.size() != scalars.size()) {
    throw PreconditionError("MultiExp size mismatch");
  }
  std::vector<blst_p2_affine> pts;
  std::vector<blst_scalar> ks;
  pts.reserve(points.size());
  ks.reserve(points.size());
  blst_p2 acc{};
  for (size_t i = 0; i < points.size(); ++i) {
    if (scalars[i].IsZero() || blst_p2_affine_is_inf(&points[i])) continue;
    if (scalars[i].IsOne()) {
      blst_p2_add_or_double_affine(&acc, &acc, &points[i]);
      continue;
    }
    pts.push_back(points[i]);
    ks.push_back(scalars[i].ToScalar());
  }
  if (pts.size() == 1) {
    blst_p2 base, out;
    blst_p2_from_affine(&base, &pts[0]);
    blst_p2_mult(&out, &base, ks[0].b, 255);
    blst_p2_add_or_double(&acc, &acc, &out);
  } else if (pts.size() > 1) {
    const blst_p2_affine* pp[2] = {pts.data(), nullptr};
    const uint8_t* sp[2] = {ks[0].b, nullptr};
    std::vector<limb_t> scratch(
        blst_p2s_mult_pippenger_scratch_sizeof(pts.size()) / sizeof(limb_t));
    blst_p2 out;
    blst_p2s_mult_pippenger(&out, pp, pts.size(), sp, 255, scratch.data());
    blst_p2_add_or_double(&acc, &acc, &out);
  }
  return G2(acc);
}

G1FixedBase::G1FixedBase(const G1& base) {
  // table_[w * 256 + d] = d * 256^w * base, for d in [0, 256).
  std::vector<G1> proj(kWindows * kWindowSize);
  G1 window_base = base;
  for (size_t w = 0; w < kWindows; ++w) {
    G1 acc;
    for (size_t d = 0; d < kWindowSize; ++d) {
      proj[w * kWindowSize + d] = acc;
      acc += window_base;
    }
    window_base = acc;
  }
  table_ = ToAffine(proj);
}

G1 G1FixedBase::Mul(const Fr& k) const {
  const blst_scalar s = k.ToScalar();
  blst_p1 acc{};
  for (size_t w = 0; w < kWindows; ++w) {
    const uint8_t d = s.b[w];
    if (d != 0) {
      blst_p1_add_or_double_affine(&acc, &acc, &table_[w * kWindowSize + d]);
    }
  }
  return G1(acc);
}

std::vector<blst_p1_affine> G1FixedBase::BatchMul(
    std::span<const Fr> scalars) const {
  std::vector<G1> proj;
  proj.reserve(scalars.size());
  for (const Fr& k : scalars) proj.push_back(Mul(k));
  return ToAffine(proj);
}

G2FixedBase::G2FixedBase(const G2& base) {
  std::vector<G2> proj(kWindows * kWindowSize);
  G2 window_base = base;
  for (size_t w = 0; w < kWindows; ++w) {
    G2 acc;
    for (size_t d = 0; d < kWindowSize; ++d) {
      proj[w * kWindowSize + d] = acc;
      acc += window_base;
    }
    window_base = acc;
  }
  table_ = ToAffine(proj);
}

G2 G2FixedBase::Mul(const Fr& k) const {
  const blst_scalar s = k.ToScalar();
  blst_p2 acc{};
  for (size_t w = 0; w < kWindows; ++w) {
    const uint8_t d = s.b[w];
    if (d != 0) {
      blst_p2_add_or_double_affine(&acc, &acc, &table_[w * kWindowSize + d]);
    }
  }
  return G2(acc);
}

std::vector<blst_p2_affine> G2FixedBase::BatchMul(
    std::span<const Fr> scalars) const {
  std::vector<G2> proj;
  proj.reserve(scalars.size());
  for (const Fr& k : scalars) proj.push_back(Mul(k));
  return ToAffine(proj);
}

bool operator==(const Gt& a, const Gt& b) {
  return blst_fp12_is_equal(&a.v, &b.v);
}

Gt MultiPairing(std::span<const G1> ps, std::span<const G2> qs) {
  if (ps.size() != qs.size() || ps.empty()) {
    throw PreconditionError("MultiPairing size mismatch");
  }
  blst_fp12 acc = *blst_fp12_one();
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].IsIdentity() || qs[i].IsIdentity()) continue;
    const blst_p1_affine p = ps[i].ToAffine();
    const blst_p2_affine q = qs[i].ToAffine();
    blst_fp12 ml;
    blst_miller_loop(&ml, &q, &p);
    blst_fp12_mul(&acc, &acc, &ml);
  }
  Gt out;
  blst_final_exp(&out.v, &acc);
  return out;
}

Gt Pairing(const G1& p, const G2& q) {
  const G1 ps[1] = {p};
  const G2 qs[1] = {q};
  return MultiPairing(ps, qs);
}

Gt GtMul(const Gt& a, const Gt& b) {
  Gt out;
  blst_fp12_mul(&out.v, &a.v, &b.v);
  return out;
}

}  // namespace anonkey::zkp
