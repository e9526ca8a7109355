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

#include "anonkey/bench/scenarios.h"

#include <algorithm>
#include <chrono>

#include "anonkey/bench/stack.h"
#include "anonkey/core/errors.h"
#include "anonkey/core/note.h"
#include "anonkey/merkle/merkle_tree.h"
#include "anonkey/zkp/relation.h"
#include "spdlog/spdlog.h"

namespace anonkey::bench {

namespace {

using Clock = std::chrono::steady_clock;

double Ms(Clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

}  // namespace

ProveScalingResult RunProveScaling(const ProveScalingOptions& options) {
  if (options.depths.size() < 2 || options.repetitions == 0 ||
      options.verify_repetitions == 0) {
    throw PreconditionError("prove scaling needs two depths and one rep");
  }
  struct PerDepth {
    zkp::RelationConfig config;
    size_t proving_key_bytes = 0, verification_key_bytes = 0;
    std::optional<zkp::Prover> prover;
    std::optional<zkp::Verifier> verifier;
    std::unique_ptr<merkle::MerkleTree> tree;
    std::vector<Note> notes;
    double setup_ms = 0;
    std::vector<double> prove, verify;
  };
  std::vector<PerDepth> runs(options.depths.size());
  const Hasher hasher(options.hash_profile);
  for (size_t i = 0; i < runs.size(); ++i) {
    auto& d = runs[i];
    d.config.hash_profile = options.hash_profile;
    d.config.kem_profile = KemProfile::kDhkem;
    d.config.lambda = options.lambda;
    d.config.depth = options.depths[i];
    const auto start = Clock::now();
    zkp::Crs crs = zkp::Setup(options.backend, d.config,
                              zkp::SetupOptions{options.seed});
    d.setup_ms = Ms(Clock::now() - start);
    d.proving_key_bytes = crs.proving_key.size();
    d.verification_key_bytes = crs.verification_key.size();
    d.prover.emplace(zkp::Prover::Load(crs.proving_key));
    d.verifier.emplace(zkp::Verifier::Load(crs.verification_key));

    MockEntropySource entropy(options.seed + d.config.depth);
    d.tree = std::make_unique<merkle::MerkleTree>(options.hash_profile,
                                                  d.config.depth);
    const size_t users = std::min<uint64_t>(
        std::max<size_t>(options.users, 1), d.tree->capacity());
    for (size_t u = 0; u < users; ++u) {
      d.notes.push_back(
          UserInit(options.lambda, KemProfile::kDhkem, entropy));
      d.tree->AddLeaf(DeriveCommitment(d.notes.back(), hasher).value);
    }
  }

  ProveScalingResult out;
  for (size_t r = 0; r < options.repetitions; ++r) {
    for (auto& d : runs) {
      // Rotate through leaves so the path is not always the same.
      auto [x, w] =
          zkp::MakeStatementAndWitness(d.notes[r % d.notes.size()], *d.tree);
      auto t0 = Clock::now();
      Bytes proof = d.prover->Prove(x, w);
      d.prove.push_back(Ms(Clock::now() - t0));
      out.proof_sizes.insert(proof.size());
      for (size_t v = 0; v < options.verify_repetitions; ++v) {
        t0 = Clock::now();
        const bool ok = d.verifier->Verify(x, proof).accepted;
        d.verify.push_back(Ms(Clock::now() - t0));
        if (!ok) throw Error("honest proof rejected");
      }
    }
  }

  std::vector<double> xs, prove_min, prove_median, constraints;
  out.verify_min_ms = 1e300;
  for (auto& d : runs) {
    const double pmin = *std::min_element(d.prove.begin(), d.prove.end());
    const double pmed = Median(d.prove);
    const double vmin = *std::min_element(d.verify.begin(), d.verify.end());
    const auto stats = zkp::MeasureCircuit(d.config);

    BenchRecord rec;
    rec.scenario = "prove-scaling";
    rec.seed = options.seed;
    rec.params = {{"depth", d.config.depth},
                  {"backend", std::string(zkp::BackendName(options.backend))},
                  {"hash_profile",
                   std::string(HashProfileName(options.hash_profile))},
                  {"lambda", options.lambda},
                  {"repetitions", options.repetitions},
                  {"proof_bytes", *out.proof_sizes.rbegin()},
                  {"proving_key_bytes", d.proving_key_bytes},
                  {"verification_key_bytes", d.verification_key_bytes}};
    rec.constraints = stats.num_constraints;
    rec.timings_ms["setup"] = d.setup_ms;
    rec.timings_ms["prove_median"] = pmed;
    rec.timings_ms["prove_min"] = pmin;
    rec.timings_ms["prove_max"] =
        *std::max_element(d.prove.begin(), d.prove.end());
    rec.timings_ms["verify_median"] = Median(d.verify);
    rec.timings_ms["verify_min"] = vmin;
    out.verify_min_ms = std::min(out.verify_min_ms, vmin);
    out.verify_max_ms = std::max(out.verify_max_ms, vmin);
    spdlog::info("prove-scaling depth {}: {} constraints, prove min {:.1f} "
                 "ms median {:.1f} ms, verify min {:.2f} ms",
                 d.config.depth, stats.num_constraints, pmin, pmed, vmin);

    xs.push_back(d.config.depth);
    prove_min.push_back(pmin);
    prove_median.push_back(pmed);
    constraints.push_back(static_cast<double>(stats.num_constraints));
    out.records.push_back(std::move(rec));
  }
  out.prove_min_fit = FitLine(xs, prove_min);
  out.prove_median_fit = FitLine(xs, prove_median);
  out.constraint_fit = FitLine(xs, constraints);
  return out;
}

std::vector<BenchRecord> RunKeyRequest(const KeyRequestOptions& options) {
  if (options.sizes.empty() || options.repetitions == 0) {
    throw PreconditionError("key request bench needs sizes and one rep");
  }
  StackOptions so;
  so.backend = options.backend;
  so.depth = options.depth;
  so.seed = options.seed;
  so.pvs_entropy = options.entropy;
  so.max_t = std::max<size_t>(
      pvs::kDefaultMaxKeyBytes,
      *std::max_element(options.sizes.begin(), options.sizes.end()));
  const size_t needed = options.sizes.size() * options.repetitions;
  while ((uint64_t{1} << so.depth) < needed) ++so.depth;
  Stack stack(so);

  std::vector<Stack::User> users;
  for (size_t i = 0; i < needed; ++i) users.push_back(stack.AddUser());
  stack.Sync();

  std::vector<BenchRecord> out;
  size_t next = 0;
  for (uint32_t t : options.sizes) {
    std::map<std::string, std::vector<double>> samples;
    size_t upload_bytes = 0, delivery_bytes = 0;
    for (size_t r = 0; r < options.repetitions; ++r) {
      // Proving happens before the tunnel opens and is not part of the step.
      auto req = stack.Prove(users[next++], t);
      auto red = stack.Redeem(req, options.tunnel_rate);
      if (!red.delivered()) {
        throw Error("honest key request refused: " + red.outcome());
      }
      const double upload = Ms(red.session.upload);
      const double delivery = Ms(red.session.delivery);
      const double total = Ms(red.session.select) + upload +
                           Ms(red.session.handle) + delivery;
      samples["select"].push_back(Ms(red.session.select));
      samples["upload"].push_back(upload);
      samples["validation"].push_back(Ms(red.request.validation));
      samples["generation"].push_back(Ms(red.request.generation));
      samples["encapsulation"].push_back(Ms(red.request.encapsulation));
      samples["delivery"].push_back(delivery);
      samples["total"].push_back(total);
      samples["transfer_share"].push_back((upload + delivery) / total);
      samples["delivery_share"].push_back(delivery / total);
      upload_bytes = red.session.upload_bytes;
      delivery_bytes = red.session.delivery_bytes;
    }
    BenchRecord rec;
    rec.scenario = "key-request";
    rec.seed = options.seed;
    const EntropyKind kind =
        options.entropy ? options.entropy->kind : EntropyKind::kMock;
    rec.params = {{"t", t},
                  {"backend", std::string(zkp::BackendName(options.backend))},
                  {"depth", so.depth},
                  {"entropy", std::string(EntropyKindName(kind))},
                  {"tunnel_rate", options.tunnel_rate},
                  {"repetitions", options.repetitions},
                  {"upload_bytes", upload_bytes},
                  {"delivery_bytes", delivery_bytes},
                  {"transfer_share", Median(samples["transfer_share"])},
                  {"delivery_share", Median(samples["delivery_share"])}};
    for (auto& [k, v] : samples) {
      if (k.ends_with("_share")) continue;
      rec.timings_ms[k] = Median(v);
    }
    spdlog::info("key-request t={}: total {:.1f} ms, transfer share {:.3f}",
                 t, rec.timings_ms["total"],
                 rec.params["transfer_share"].get<double>());
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace anonkey::bench
