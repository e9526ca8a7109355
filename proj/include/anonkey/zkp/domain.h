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

#ifndef ANONKEY_ZKP_DOMAIN_H_
#define ANONKEY_ZKP_DOMAIN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "anonkey/core/field.h"

namespace anonkey::zkp {

// Multiplicative subgroup of Fr* used as the QAP evaluation domain.
//
// r - 1 = 2^32 * 3 * 11 * 19 * (larger primes), so subgroups exist for any
// size 2^a * 3^b * 11^c * 19^d with a <= 32 and b, c, d <= 1. Picking the
// smallest such size above the constraint count keeps padding small, which
// keeps proving cost close to linear in the circuit size.
class EvaluationDomain {
 public:
  // Smallest supported size >= min_size. Throws PreconditionError if none.
  static EvaluationDomain ForSize(uint64_t min_size);

  uint64_t size() const { return n_; }
  const Fr& omega() const { return omega_; }
  const std::vector<uint32_t>& radices() const { return radices_; }

  // Coefficients -> evaluations at omega^i (in place).
  void Fft(std::vector<Fr>& a) const;
  // Evaluations -> coefficients (in place).
  void InverseFft(std::vector<Fr>& a) const;
  // Evaluations at g * omega^i.
  void CosetFft(std::vector<Fr>& a, const Fr& g) const;
  void CosetInverseFft(std::vector<Fr>& a, const Fr& g) const;

  // Z(x) = x^n - 1.
  Fr VanishingAt(const Fr& x) const;
  // L_j(tau) for j in [0, n). Requires tau^n != 1.
  std::vector<Fr> LagrangeAt(const Fr& tau) const;

  // Multiplicative generator of Fr*, used as the coset shift.
  static Fr CosetShift() { return Fr::FromU64(7); }

 private:
  EvaluationDomain(uint64_t n, std::vector<uint32_t> radices);

  void Transform(std::vector<Fr>& a, const std::vector<Fr>& powers) const;

  uint64_t n_;
  std::vector<uint32_t> radices_;
  Fr omega_;
  Fr omega_inv_;
  Fr n_inv_;
  // omega^k and omega^-k for k in [0, n).
  std::vector<Fr> powers_;
  std::vector<Fr> inv_powers_;
};

// Sizes the domain can take, for tests and diagnostics.
bool IsSupportedDomainSize(uint64_t n);

}  // namespace anonkey::zkp

#endif  // ANONKEY_ZKP_DOMAIN_H_
