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

#include "anonkey/zkp/domain.h"

#include <algorithm>
#include <array>
#include <limits>

#include "anonkey/core/errors.h"

namespace anonkey::zkp {
namespace {

constexpr uint32_t kOddFactors[] = {3, 11, 19};
constexpr unsigned kTwoAdicity = 32;

// Divides the big-endian integer `be` by `d` in place; returns the remainder.
uint32_t DivideInPlace(std::array<uint8_t, 32>& be, uint32_t d) {
  uint64_t rem = 0;
  for (auto& byte : be) {
    const uint64_t cur = (rem << 8) | byte;
    byte = static_cast<uint8_t>(cur / d);
    rem = cur % d;
  }
  return static_cast<uint32_t>(rem);
}

// Recursive mixed-radix decimation in time. `stride` walks the input;
// powers[j * step] is root^j for the size-n transform.
void FftRec(const Fr* in, size_t stride, Fr* out, size_t n,
            std::span<const uint32_t> radices, const std::vector<Fr>& powers,
            size_t step, std::vector<Fr>& scratch) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const uint32_t p = radices.front();
  const size_t m = n / p;
  // Sub-transforms of the p interleaved subsequences, stored blockwise.
  for (uint32_t r = 0; r < p; ++r) {
    FftRec(in + r * stride, stride * p, out + r * m, m, radices.subspan(1),
           powers, step * p, scratch);
  }
  if (p == 2) {
    for (size_t k = 0; k < m; ++k) {
      const Fr t = powers[k * step] * out[m + k];
      out[m + k] = out[k] - t;
      out[k] = out[k] + t;
    }
    return;
  }
  // Odd prime radix. With zeta = root^m and t_r = root^{rk} Y_r[k],
  // X[k + m q] = t_0 + sum_{r=1}^{h} (c_{rq} s_r + e_{rq} d_r) and
  // X[k + m (p - q)] uses -e, where s_r = t_r + t_{p-r},
  // d_r = t_r - t_{p-r}, c_j = (zeta^j + zeta^-j) / 2 and
  // e_j = (zeta^j - zeta^-j) / 2.
  const uint32_t h = (p - 1) / 2;
  const Fr half = Fr::FromU64(2).Inverse();
  std::vector<Fr> c(p), e(p);
  for (uint32_t j = 0; j < p; ++j) {
    const Fr& zj = powers[(j * m) * step];
    const Fr& zmj = powers[((p - j) % p) * m * step];
    c[j] = (zj + zmj) * half;
    e[j] = (zj - zmj) * half;
  }
  scratch.resize(std::max(scratch.size(), n));
  std::vector<Fr> t(p), sum(h + 1), diff(h + 1);
  for (size_t k = 0; k < m; ++k) {
    t[0] = out[k];
    for (uint32_t r = 1; r < p; ++r) {
      t[r] = powers[r * k * step] * out[r * m + k];
    }
    Fr x0 = t[0];
    for (uint32_t r = 1; r <= h; ++r) {
      sum[r] = t[r] + t[p - r];
      diff[r] = t[r] - t[p - r];
      x0 += sum[r];
    }
    scratch[k] = x0;
    for (uint32_t q = 1; q <= h; ++q) {
      Fr a = t[0];
      Fr b = Fr::Zero();
      for (uint32_t r = 1; r <= h; ++r) {
        const uint32_t j = (r * q) % p;
        a += c[j] * sum[r];
        b += e[j] * diff[r];
      }
      scratch[k + m * q] = a + b;
      scratch[k + m * (p - q)] = a - b;
    }
  }
  std::copy(scratch.begin(), scratch.begin() + n, out);
}

std::vector<uint32_t> Factor(uint64_t n) {
  std::vector<uint32_t> radices;
  for (uint32_t p : kOddFactors) {
    if (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  while (n % 2 == 0) {
    radices.push_back(2);
    n /= 2;
  }
  if (n != 1) return {};
  return radices;
}

}  // namespace

bool IsSupportedDomainSize(uint64_t n) {
  if (n == 0) return false;
  auto radices = Factor(n);
  if (radices.empty()) return n == 1;
  return std::count(radices.begin(), radices.end(), 2u) <= kTwoAdicity;
}

EvaluationDomain EvaluationDomain::ForSize(uint64_t min_size) {
  if (min_size < 2) min_size = 2;
  uint64_t best = std::numeric_limits<uint64_t>::max();
  for (uint64_t odd : {1, 3, 11, 19, 33, 57, 209, 627}) {
    uint64_t n = odd;
    unsigned twos = 0;
    while (n < min_size && twos < kTwoAdicity) {
      n *= 2;
      ++twos;
    }
    if (n >= min_size) best = std::min(best, n);
  }
  if (best == std::numeric_limits<uint64_t>::max()) {
    throw PreconditionError("circuit too large for the evaluation domain");
  }
  return EvaluationDomain(best, Factor(best));
}

EvaluationDomain::EvaluationDomain(uint64_t n, std::vector<uint32_t> radices)
    : n_(n), radices_(std::move(radices)) {
  // omega = 7^((r - 1) / n); check it has exact order n.
  std::array<uint8_t, 32> e = ScalarModulusMinusOne();
  for (uint32_t p : radices_) {
    if (DivideInPlace(e, p) != 0) {
      throw PreconditionError("domain size does not divide r - 1");
    }
  }
  omega_ = CosetShift().Pow(e);
  if (!omega_.Pow(n_).IsOne()) throw Error("bad root of unity");
  for (uint32_t p : {2u, 3u, 11u, 19u}) {
    if (n_ % p == 0 && omega_.Pow(n_ / p).IsOne()) {
      throw Error("root of unity has smaller order than domain size");
    }
  }
  omega_inv_ = omega_.Inverse();
  n_inv_ = Fr::FromU64(n_).Inverse();
  powers_.resize(n_);
  inv_powers_.resize(n_);
  powers_[0] = inv_powers_[0] = Fr::One();
  for (uint64_t k = 1; k < n_; ++k) {
    powers_[k] = powers_[k - 1] * omega_;
    inv_powers_[k] = inv_powers_[k - 1] * omega_inv_;
  }
}

void EvaluationDomain::Transform(std::vector<Fr>& a,
                                 const std::vector<Fr>& powers) const {
  if (a.size() > n_) throw PreconditionError("polynomial exceeds domain");
  a.resize(n_);
  std::vector<Fr> out(n_);
  std::vector<Fr> scratch;
  FftRec(a.data(), 1, out.data(), n_, radices_, powers, 1, scratch);
  a.swap(out);
}

void EvaluationDomain::Fft(std::vector<Fr>& a) const { Transform(a, powers_); }

void EvaluationDomain::InverseFft(std::vector<Fr>& a) const {
  Transform(a, inv_powers_);
  for (auto& x : a) x *= n_inv_;
}

void EvaluationDomain::CosetFft(std::vector<Fr>& a, const Fr& g) const {
  a.resize(n_);
  Fr gi = Fr::One();
  for (auto& x : a) {
    x *= gi;
    gi *= g;
  }
  Fft(a);
}

void EvaluationDomain::CosetInverseFft(std::vector<Fr>& a, const Fr& g) const {
  InverseFft(a);
  const Fr g_inv = g.Inverse();
  Fr gi = Fr::One();
  for (auto& x : a) {
    x *= gi;
    gi *= g_inv;
  }
}

Fr EvaluationDomain::VanishingAt(const Fr& x) const {
  return x.Pow(n_) - Fr::One();
}

std::vector<Fr> EvaluationDomain::LagrangeAt(const Fr& tau) const {
  // L_j(tau) = Z(tau) / n * omega^j / (tau - omega^j)
  const Fr z = VanishingAt(tau);
  if (z.IsZero()) throw PreconditionError("tau lies in the domain");
  std::vector<Fr> denom(n_);
  std::vector<Fr> wj(n_);
  Fr w = Fr::One();
  for (uint64_t j = 0; j < n_; ++j) {
    wj[j] = w;
    denom[j] = tau - w;
    w *= omega_;
  }
  BatchInvert(denom);
  const Fr scale = z * n_inv_;
  for (uint64_t j = 0; j < n_; ++j) denom[j] *= scale * wj[j];
  return denom;
}

}  // namespace anonkey::zkp
