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

#include "anonkey/zkp/sha256_gadget.h"

#include <array>
#include <optional>

#include "anonkey/core/errors.h"
#include "anonkey/zkp/gadgets.h"

namespace anonkey::zkp {
namespace {

constexpr uint32_t kK[64] = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

constexpr uint32_t kIv[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                             0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};

using LC = LinearCombination;
// w[i] is bit i, least significant first.
using Word = std::array<LC, 32>;

class Builder {
 public:
  Builder(ConstraintSystem& cs, Clause clause) : cs_(cs), clause_(clause) {}

  static LC Const(bool b) { return LC::Constant(b ? Fr::One() : Fr()); }

  static Word ConstWord(uint32_t v) {
    Word w;
    for (int i = 0; i < 32; ++i) w[i] = Const((v >> i) & 1);
    return w;
  }

  bool BitValue(const LC& x) const { return !cs_.Value(x).IsZero(); }

  LC Alloc(bool v) {
    return LC(cs_.AllocPrivate(v ? Fr::One() : Fr()));
  }

  LC Xor(const LC& a, const LC& b) {
    auto ca = gadgets::ConstantValue(a);
    auto cb = gadgets::ConstantValue(b);
    if (ca) return ca->IsZero() ? b : LC::Constant(Fr::One()) - b;
    if (cb) return cb->IsZero() ? a : LC::Constant(Fr::One()) - a;
    LC c = Alloc(BitValue(a) != BitValue(b));
    // 2a * b = a + b - c
    cs_.Enforce(a * Fr::FromU64(2), b, a + b - c, clause_);
    return c;
  }

  LC And(const LC& a, const LC& b) {
    auto ca = gadgets::ConstantValue(a);
    auto cb = gadgets::ConstantValue(b);
    if (ca) return ca->IsZero() ? Const(false) : b;
    if (cb) return cb->IsZero() ? Const(false) : a;
    LC c = Alloc(BitValue(a) && BitValue(b));
    cs_.Enforce(a, b, c, clause_);
    return c;
  }

  // g + e (f - g)
  LC Ch(const LC& e, const LC& f, const LC& g) {
    if (auto ce = gadgets::ConstantValue(e)) return ce->IsZero() ? g : f;
    const LC diff = f - g;
    if (auto cd = gadgets::ConstantValue(diff); cd && cd->IsZero()) return g;
    LC out = Alloc(BitValue(e) ? BitValue(f) : BitValue(g));
    cs_.Enforce(e, diff, out - g, clause_);
    return out;
  }

  // bc + a (b + c - 2bc)
  LC Maj(const LC& a, const LC& b, const LC& c) {
    const LC bc = And(b, c);
    const LC rest = b + c - bc * Fr::FromU64(2);
    auto ca = gadgets::ConstantValue(a);
    if (ca) return ca->IsZero() ? bc : bc + rest;
    if (auto cr = gadgets::ConstantValue(rest); cr && cr->IsZero()) return bc;
    const int votes = BitValue(a) + BitValue(b) + BitValue(c);
    LC out = Alloc(votes >= 2);
    cs_.Enforce(a, rest, out - bc, clause_);
    return out;
  }

  Word Xor3(const Word& x, const Word& y, const Word& z) {
    Word out;
    for (int i = 0; i < 32; ++i) out[i] = Xor(Xor(x[i], y[i]), z[i]);
    return out;
  }

  static Word RotR(const Word& w, int n) {
    Word out;
    for (int i = 0; i < 32; ++i) out[i] = w[(i + n) % 32];
    return out;
  }

  static Word ShR(const Word& w, int n) {
    Word out;
    for (int i = 0; i < 32; ++i) out[i] = i + n < 32 ? w[i + n] : Const(false);
    return out;
  }

  // Sum of words modulo 2^32.
  Word Add(std::initializer_list<const Word*> terms) {
    LC sum;
    uint64_t max_sum = 0;
    uint64_t value = 0;
    bool all_const = true;
    for (const Word* t : terms) {
      uint64_t term_max = 0;
      for (int i = 0; i < 32; ++i) {
        const LC& bit = (*t)[i];
        const Fr weight = Fr::FromU64(uint64_t{1} << i);
        for (const auto& [v, c] : bit.terms()) sum.Add(v, c * weight);
        auto cb = gadgets::ConstantValue(bit);
        if (cb) {
          if (!cb->IsZero()) term_max |= uint64_t{1} << i;
        } else {
          all_const = false;
          term_max |= uint64_t{1} << i;
        }
        if (BitValue(bit)) value += uint64_t{1} << i;
      }
      max_sum += term_max;
    }
    sum.Normalize();
    if (all_const) {
      // Fold entirely; constant values are exact in both build modes.
      uint64_t c = 0;
      for (const Word* t : terms) {
        for (int i = 0; i < 32; ++i) {
          if (!gadgets::ConstantValue((*t)[i])->IsZero()) c += uint64_t{1} << i;
        }
      }
      return ConstWord(static_cast<uint32_t>(c));
    }
    int carry_bits = 0;
    while ((max_sum >> (32 + carry_bits)) != 0) ++carry_bits;
    Word out;
    LC packed;
    for (int i = 0; i < 32 + carry_bits; ++i) {
      const Var v = cs_.AllocPrivate(Fr::FromU64((value >> i) & 1));
      cs_.EnforceBoolean(v, clause_);
      packed.Add(v, Fr::FromU64(uint64_t{1} << i));
      if (i < 32) out[i] = LC(v);
    }
    cs_.EnforceEqual(packed, sum, clause_);
    return out;
  }

  void Compress(std::array<Word, 8>& h, std::span<const LC> block) {
    std::array<Word, 64> w;
    for (int j = 0; j < 16; ++j) {
      for (int k = 0; k < 32; ++k) w[j][31 - k] = block[32 * j + k];
    }
    for (int t = 16; t < 64; ++t) {
      const Word s0 =
          Xor3(RotR(w[t - 15], 7), RotR(w[t - 15], 18), ShR(w[t - 15], 3));
      const Word s1 =
          Xor3(RotR(w[t - 2], 17), RotR(w[t - 2], 19), ShR(w[t - 2], 10));
      w[t] = Add({&s1, &w[t - 7], &s0, &w[t - 16]});
    }
    Word a = h[0], b = h[1], c = h[2], d = h[3];
    Word e = h[4], f = h[5], g = h[6], hh = h[7];
    for (int t = 0; t < 64; ++t) {
      const Word big_s1 = Xor3(RotR(e, 6), RotR(e, 11), RotR(e, 25));
      Word ch;
      for (int i = 0; i < 32; ++i) ch[i] = Ch(e[i], f[i], g[i]);
      const Word big_s0 = Xor3(RotR(a, 2), RotR(a, 13), RotR(a, 22));
      Word maj;
      for (int i = 0; i < 32; ++i) maj[i] = Maj(a[i], b[i], c[i]);
      const Word k = ConstWord(kK[t]);
      Word new_e = Add({&d, &hh, &big_s1, &ch, &k, &w[t]});
      Word new_a = Add({&hh, &big_s1, &ch, &k, &w[t], &big_s0, &maj});
      hh = g;
      g = f;
      f = e;
      e = std::move(new_e);
      d = c;
      c = b;
      b = a;
      a = std::move(new_a);
    }
    const Word* work[8] = {&a, &b, &c, &d, &e, &f, &g, &hh};
    for (int i = 0; i < 8; ++i) h[i] = Add({&h[i], work[i]});
  }

 private:
  ConstraintSystem& cs_;
  Clause clause_;
};

}  // namespace

std::vector<LinearCombination> Sha256Gadget(
    ConstraintSystem& cs, const std::vector<LinearCombination>& message,
    Clause clause) {
  if (message.size() % 8 != 0) throw PreconditionError("message not bytes");
  std::vector<LC> padded = message;
  const uint64_t bit_len = message.size();
  padded.push_back(Builder::Const(true));
  while (padded.size() % 512 != 448) padded.push_back(Builder::Const(false));
  for (int i = 63; i >= 0; --i) {
    padded.push_back(Builder::Const((bit_len >> i) & 1));
  }
  Builder b(cs, clause);
  std::array<Word, 8> h;
  for (int i = 0; i < 8; ++i) h[i] = Builder::ConstWord(kIv[i]);
  for (size_t off = 0; off < padded.size(); off += 512) {
    b.Compress(h, std::span<const LC>(padded).subspan(off, 512));
  }
  std::vector<LC> out;
  out.reserve(256);
  for (int i = 0; i < 8; ++i) {
    for (int k = 31; k >= 0; --k) out.push_back(h[i][k]);
  }
  return out;
}

}  // namespace anonkey::zkp
