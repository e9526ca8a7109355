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

#ifndef ANONKEY_TESTS_ORACLE_H_
#define ANONKEY_TESTS_ORACLE_H_

// Independent reference implementations used as test oracles. They share no
// code with the library: SHA-256 comes from libsodium and field arithmetic
// from GMP.

#include <gmpxx.h>
#include <sodium.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Bytes = std::vector<uint8_t>;
using Digest32 = std::array<uint8_t, 32>;

inline Digest32 Sha256(const Bytes& data) {
  Digest32 out;
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

inline const mpz_class& Modulus() {
  static const mpz_class r(
      "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001", 16);
  return r;
}

inline mpz_class FromBytes(const uint8_t* p, size_t n) {
  mpz_class x;
  if (n > 0) mpz_import(x.get_mpz_t(), n, 1, 1, 1, 0, p);
  return x;
}

inline mpz_class Reduce(const mpz_class& x) {
  mpz_class y = x % Modulus();
  if (y < 0) y += Modulus();
  return y;
}

inline Digest32 ToBytes32(const mpz_class& x) {
  Digest32 out{};
  size_t count = 0;
  uint8_t buf[64];
  mpz_export(buf, &count, 1, 1, 1, 0, x.get_mpz_t());
  std::copy(buf, buf + count, out.begin() + (32 - count));
  return out;
}

inline mpz_class Inv(const mpz_class& x) {
  mpz_class out;
  mpz_invert(out.get_mpz_t(), x.get_mpz_t(), Modulus().get_mpz_t());
  return out;
}

inline mpz_class Pow5(const mpz_class& x) {
  mpz_class out;
  mpz_powm_ui(out.get_mpz_t(), x.get_mpz_t(), 5, Modulus().get_mpz_t());
  return out;
}

// Width-3 permutation with the same published parameters as the library:
// 4 + 57 + 4 rounds, constants SHA-256(label || u32be(i)) mod r, Cauchy MDS.
struct Poseidon {
  std::vector<mpz_class> rc;
  mpz_class mds[3][3];

  Poseidon() {
    const std::string label = "anonkey/poseidon/bls12-381/t3/rc";
    for (uint32_t i = 0; i < 65 * 3; ++i) {
      Bytes in(label.begin(), label.end());
      in.push_back(static_cast<uint8_t>(i >> 24));
      in.push_back(static_cast<uint8_t>(i >> 16));
      in.push_back(static_cast<uint8_t>(i >> 8));
      in.push_back(static_cast<uint8_t>(i));
      Digest32 d = Sha256(in);
      rc.push_back(Reduce(FromBytes(d.data(), d.size())));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) mds[i][j] = Inv(mpz_class(i + j + 3));
  }

  void Permute(mpz_class s[3]) const {
    for (int round = 0; round < 65; ++round) {
      for (int i = 0; i < 3; ++i) s[i] = Reduce(s[i] + rc[round * 3 + i]);
      const bool full = round < 4 || round >= 61;
      for (int i = 0; i < (full ? 3 : 1); ++i) s[i] = Pow5(s[i]);
      mpz_class m[3];
      for (int i = 0; i < 3; ++i) {
        m[i] = 0;
        for (int j = 0; j < 3; ++j) m[i] += mds[i][j] * s[j];
        m[i] = Reduce(m[i]);
      }
      for (int i = 0; i < 3; ++i) s[i] = m[i];
    }
  }

  mpz_class HashBytes(const Bytes& data) const {
    std::vector<mpz_class> elems;
    for (size_t off = 0; off < data.size(); off += 31) {
      const size_t n = std::min<size_t>(31, data.size() - off);
      elems.push_back(FromBytes(data.data() + off, n));
    }
    mpz_class s[3];
    s[0] = (mpz_class(1) << 64) + static_cast<unsigned long>(data.size());
    s[1] = 0;
    s[2] = 0;
    if (elems.empty()) Permute(s);
    for (size_t i = 0; i < elems.size(); i += 2) {
      s[1] = Reduce(s[1] + elems[i]);
      if (i + 1 < elems.size()) s[2] = Reduce(s[2] + elems[i + 1]);
      Permute(s);
    }
    return s[1];
  }

  mpz_class HashNode(const mpz_class& l, const mpz_class& r) const {
    mpz_class s[3] = {mpz_class(2), l, r};
    Permute(s);
    return s[1];
  }
};

inline const Poseidon& DefaultPoseidon() {
  static const Poseidon p;
  return p;
}

// H under a profile name ("sha256" or "algebraic").
inline Digest32 Hash(const std::string& profile, const Bytes& data) {
  if (profile == "sha256") return Sha256(data);
  return ToBytes32(DefaultPoseidon().HashBytes(data));
}

inline Digest32 HashNode(const std::string& profile, const Digest32& l,
                         const Digest32& r) {
  if (profile == "sha256") {
    Bytes in(l.begin(), l.end());
    in.insert(in.end(), r.begin(), r.end());
    return Sha256(in);
  }
  return ToBytes32(DefaultPoseidon().HashNode(FromBytes(l.data(), 32),
                                              FromBytes(r.data(), 32)));
}

inline Bytes LengthPrefixed(const Bytes& v) {
  Bytes out = {static_cast<uint8_t>(v.size() >> 24),
               static_cast<uint8_t>(v.size() >> 16),
               static_cast<uint8_t>(v.size() >> 8),
               static_cast<uint8_t>(v.size())};
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Stream of the seeded mock entropy source.
inline Bytes MockEntropy(uint64_t seed, size_t n) {
  const std::string label = "anonkey-mock-entropy";
  Bytes out;
  for (uint64_t block = 0; out.size() < n; ++block) {
    Bytes in(label.begin(), label.end());
    for (int i = 7; i >= 0; --i) in.push_back(static_cast<uint8_t>(seed >> (8 * i)));
    for (int i = 7; i >= 0; --i) in.push_back(static_cast<uint8_t>(block >> (8 * i)));
    Digest32 d = Sha256(in);
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(n);
  return out;
}

}  // namespace oracle

#endif  // ANONKEY_TESTS_ORACLE_H_
