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

#include "anonkey/zkp/groth16.h"

#include "anonkey/core/errors.h"
#include "anonkey/zkp/domain.h"

namespace anonkey::zkp::groth16 {
namespace {

// Constraint count including the input-consistency rows z_i * 0 = 0 for the
// one-variable and each public input. They make the u_i of public inputs
// linearly independent.
uint64_t TotalRows(const ConstraintSystem& cs) {
  return cs.num_constraints() + cs.num_public() + 1;
}

void PutG1(Bytes& out, const G1& p) { Append(out, p.Serialize()); }
void PutG2(Bytes& out, const G2& p) { Append(out, p.Serialize()); }

void PutAffine(Bytes& out, const blst_p1_affine& a) {
  uint8_t buf[G1::kSerializedBytes];
  blst_p1_affine_serialize(buf, &a);
  out.insert(out.end(), buf, buf + sizeof(buf));
}

void PutAffine(Bytes& out, const blst_p2_affine& a) {
  uint8_t buf[G2::kSerializedBytes];
  blst_p2_affine_serialize(buf, &a);
  out.insert(out.end(), buf, buf + sizeof(buf));
}

G1 GetG1(ByteReader& r, bool subgroup) {
  auto p = G1::Deserialize(r.Take(G1::kSerializedBytes), subgroup);
  if (!p) throw ParseError("invalid G1 point");
  return *p;
}

G2 GetG2(ByteReader& r, bool subgroup) {
  auto p = G2::Deserialize(r.Take(G2::kSerializedBytes), subgroup);
  if (!p) throw ParseError("invalid G2 point");
  return *p;
}

template <typename Affine, typename DeserializeFn>
std::vector<Affine> GetAffineVec(ByteReader& r, size_t point_bytes,
                                 DeserializeFn fn) {
  const uint64_t n = r.U64BE();
  if (n > r.remaining() / point_bytes) throw ParseError("truncated key");
  std::vector<Affine> out(n);
  for (auto& a : out) {
    if (fn(&a, r.Take(point_bytes).data()) != BLST_SUCCESS) {
      throw ParseError("invalid curve point in key");
    }
  }
  return out;
}

template <typename Affine>
void PutAffineVec(Bytes& out, const std::vector<Affine>& v) {
  AppendU64BE(out, v.size());
  for (const auto& a : v) PutAffine(out, a);
}

}  // namespace

void ProvingKey::Serialize(Bytes& out) const {
  AppendU64BE(out, num_variables);
  AppendU64BE(out, num_public);
  AppendU64BE(out, num_constraints);
  AppendU64BE(out, domain_size);
  PutG1(out, alpha1);
  PutG1(out, beta1);
  PutG1(out, delta1);
  PutG2(out, beta2);
  PutG2(out, delta2);
  PutAffineVec(out, a_query);
  PutAffineVec(out, b1_query);
  PutAffineVec(out, b2_query);
  PutAffineVec(out, l_query);
  PutAffineVec(out, h_query);
}

ProvingKey ProvingKey::Parse(ByteReader& r) {
  ProvingKey pk;
  pk.num_variables = r.U64BE();
  pk.num_public = r.U64BE();
  pk.num_constraints = r.U64BE();
  pk.domain_size = r.U64BE();
  pk.alpha1 = GetG1(r, false);
  pk.beta1 = GetG1(r, false);
  pk.delta1 = GetG1(r, false);
  pk.beta2 = GetG2(r, false);
  pk.delta2 = GetG2(r, false);
  pk.a_query = GetAffineVec<blst_p1_affine>(r, G1::kSerializedBytes,
                                            blst_p1_deserialize);
  pk.b1_query = GetAffineVec<blst_p1_affine>(r, G1::kSerializedBytes,
                                             blst_p1_deserialize);
  pk.b2_query = GetAffineVec<blst_p2_affine>(r, G2::kSerializedBytes,
                                             blst_p2_deserialize);
  pk.l_query = GetAffineVec<blst_p1_affine>(r, G1::kSerializedBytes,
                                            blst_p1_deserialize);
  pk.h_query = GetAffineVec<blst_p1_affine>(r, G1::kSerializedBytes,
                                            blst_p1_deserialize);
  if (pk.a_query.size() != pk.num_variables ||
      pk.b1_query.size() != pk.num_variables ||
      pk.b2_query.size() != pk.num_variables ||
      pk.l_query.size() != pk.num_variables - pk.num_public - 1 ||
      pk.h_query.size() + 1 != pk.domain_size ||
      !IsSupportedDomainSize(pk.domain_size)) {
    throw ParseError("inconsistent proving key dimensions");
  }
  return pk;
}

void VerifyingKey::Serialize(Bytes& out) const {
  PutG1(out, alpha1);
  PutG2(out, beta2);
  PutG2(out, gamma2);
  PutG2(out, delta2);
  AppendU64BE(out, ic.size());
  for (const G1& p : ic) PutG1(out, p);
}

VerifyingKey VerifyingKey::Parse(ByteReader& r) {
  VerifyingKey vk;
  vk.alpha1 = GetG1(r, true);
  vk.beta2 = GetG2(r, true);
  vk.gamma2 = GetG2(r, true);
  vk.delta2 = GetG2(r, true);
  const uint64_t n = r.U64BE();
  if (n == 0 || n > r.remaining() / G1::kSerializedBytes) {
    throw ParseError("bad verifying key input count");
  }
  for (uint64_t i = 0; i < n; ++i) vk.ic.push_back(GetG1(r, true));
  vk.alpha_beta = Pairing(vk.alpha1, vk.beta2);
  return vk;
}

std::array<uint8_t, Proof::kBytes> Proof::Serialize() const {
  std::array<uint8_t, kBytes> out;
  auto a_bytes = a.Compress();
  auto b_bytes = b.Compress();
  auto c_bytes = c.Compress();
  auto it = std::copy(a_bytes.begin(), a_bytes.end(), out.begin());
  it = std::copy(b_bytes.begin(), b_bytes.end(), it);
  std::copy(c_bytes.begin(), c_bytes.end(), it);
  return out;
}

std::optional<Proof> Proof::Parse(ByteSpan data) {
  if (data.size() != kBytes) return std::nullopt;
  auto a = G1::Decompress(data.first(G1::kCompressedBytes));
  auto b = G2::Decompress(
      data.subspan(G1::kCompressedBytes, G2::kCompressedBytes));
  auto c = G1::Decompress(
      data.subspan(G1::kCompressedBytes + G2::kCompressedBytes));
  if (!a || !b || !c) return std::nullopt;
  return Proof{*a, *b, *c};
}

KeyPair Setup(const ConstraintSystem& shape, const ToxicWaste& t) {
  const uint64_t m = shape.num_variables();
  const uint64_t l = shape.num_public();
  const uint64_t nc = shape.num_constraints();
  const EvaluationDomain domain = EvaluationDomain::ForSize(TotalRows(shape));
  const uint64_t n = domain.size();

  const std::vector<Fr> lag = domain.LagrangeAt(t.tau);
  std::vector<Fr> u(m), v(m), w(m);
  for (uint64_t j = 0; j < nc; ++j) {
    const Constraint& k = shape.constraints()[j];
    for (const auto& [var, c] : k.a.terms()) u[var] += c * lag[j];
    for (const auto& [var, c] : k.b.terms()) v[var] += c * lag[j];
    for (const auto& [var, c] : k.c.terms()) w[var] += c * lag[j];
  }
  for (uint64_t i = 0; i <= l; ++i) u[i] += lag[nc + i];

  const Fr gamma_inv = t.gamma.Inverse();
  const Fr delta_inv = t.delta.Inverse();
  std::vector<Fr> ic_scalars, l_scalars;
  for (uint64_t i = 0; i < m; ++i) {
    const Fr k = t.beta * u[i] + t.alpha * v[i] + w[i];
    if (i <= l) {
      ic_scalars.push_back(k * gamma_inv);
    } else {
      l_scalars.push_back(k * delta_inv);
    }
  }
  std::vector<Fr> h_scalars(n - 1);
  Fr tau_pow = domain.VanishingAt(t.tau) * delta_inv;
  for (auto& h : h_scalars) {
    h = tau_pow;
    tau_pow *= t.tau;
  }

  const G1FixedBase g1(G1::Generator());
  const G2FixedBase g2(G2::Generator());
  KeyPair kp;
  ProvingKey& pk = kp.pk;
  pk.num_variables = m;
  pk.num_public = l;
  pk.num_constraints = nc;
  pk.domain_size = n;
  pk.alpha1 = g1.Mul(t.alpha);
  pk.beta1 = g1.Mul(t.beta);
  pk.delta1 = g1.Mul(t.delta);
  pk.beta2 = g2.Mul(t.beta);
  pk.delta2 = g2.Mul(t.delta);
  pk.a_query = g1.BatchMul(u);
  pk.b1_query = g1.BatchMul(v);
  pk.b2_query = g2.BatchMul(v);
  pk.l_query = g1.BatchMul(l_scalars);
  pk.h_query = g1.BatchMul(h_scalars);

  VerifyingKey& vk = kp.vk;
  vk.alpha1 = pk.alpha1;
  vk.beta2 = pk.beta2;
  vk.gamma2 = g2.Mul(t.gamma);
  vk.delta2 = pk.delta2;
  for (const Fr& k : ic_scalars) vk.ic.push_back(g1.Mul(k));
  vk.alpha_beta = Pairing(vk.alpha1, vk.beta2);
  return kp;
}

std::vector<Fr> ComputeH(const ConstraintSystem& cs, uint64_t domain_size) {
  const EvaluationDomain domain = EvaluationDomain::ForSize(domain_size);
  if (domain.size() != domain_size) {
    throw PreconditionError("unsupported domain size");
  }
  const uint64_t nc = cs.num_constraints();
  const uint64_t n = domain.size();
  if (TotalRows(cs) > n) throw PreconditionError("circuit exceeds domain");
  const auto& z = cs.assignment();
  std::vector<Fr> a(n), b(n), c(n);
  for (uint64_t j = 0; j < nc; ++j) {
    const Constraint& k = cs.constraints()[j];
    a[j] = k.a.Evaluate(z);
    b[j] = k.b.Evaluate(z);
    c[j] = k.c.Evaluate(z);
  }
  for (uint64_t i = 0; i <= cs.num_public(); ++i) a[nc + i] = z[i];

  const Fr g = EvaluationDomain::CosetShift();
  for (auto* poly : {&a, &b, &c}) {
    domain.InverseFft(*poly);
    domain.CosetFft(*poly, g);
  }
  // Z is constant on the coset: g^n - 1.
  const Fr z_inv = domain.VanishingAt(g).Inverse();
  for (uint64_t i = 0; i < n; ++i) a[i] = (a[i] * b[i] - c[i]) * z_inv;
  domain.CosetInverseFft(a, g);
  if (!a[n - 1].IsZero()) {
    throw PreconditionError("assignment does not satisfy the constraints");
  }
  a.resize(n - 1);
  return a;
}

Proof Prove(const ProvingKey& pk, const ConstraintSystem& cs,
            const std::function<Fr()>& random_scalar) {
  if (cs.num_variables() != pk.num_variables ||
      cs.num_public() != pk.num_public ||
      cs.num_constraints() != pk.num_constraints) {
    throw PreconditionError("circuit does not match the proving key");
  }
  const std::vector<Fr> h = ComputeH(cs, pk.domain_size);
  const auto& z = cs.assignment();
  const size_t first_private = pk.num_public + 1;
  std::span<const Fr> private_z(z.begin() + first_private, z.end());

  const Fr r = random_scalar();
  const Fr s = random_scalar();

  const G1 a = pk.alpha1 + MultiExp(pk.a_query, z) + pk.delta1 * r;
  const G2 b2 = pk.beta2 + MultiExp(pk.b2_query, z) + pk.delta2 * s;
  const G1 b1 = pk.beta1 + MultiExp(pk.b1_query, z) + pk.delta1 * s;
  const G1 c = MultiExp(pk.l_query, private_z) + MultiExp(pk.h_query, h) +
               a * s + b1 * r - pk.delta1 * (r * s);
  return Proof{a, b2, c};
}

bool Verify(const VerifyingKey& vk, std::span<const Fr> public_inputs,
            const Proof& proof) {
  if (public_inputs.size() + 1 != vk.ic.size()) return false;
  G1 acc = vk.ic[0];
  for (size_t i = 0; i < public_inputs.size(); ++i) {
    acc += vk.ic[i + 1] * public_inputs[i];
  }
  // e(A, B) = e(alpha, beta) e(IC, gamma) e(C, delta)
  const G1 ps[3] = {proof.a, -acc, -proof.c};
  const G2 qs[3] = {proof.b, vk.gamma2, vk.delta2};
  return MultiPairing(ps, qs) == vk.alpha_beta;
}

}  // namespace anonkey::zkp::groth16
