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

#ifndef ANONKEY_BENCH_SCENARIOS_H_
#define ANONKEY_BENCH_SCENARIOS_H_

#include <cstdint>
#include <set>
#include <vector>

#include "anonkey/bench/records.h"
#include "anonkey/core/entropy.h"
#include "anonkey/core/hash.h"
#include "anonkey/zkp/proving_system.h"

namespace anonkey::bench {

struct ProveScalingOptions {
  std::vector<unsigned> depths{4, 8, 12, 16};
  zkp::BackendKind backend = zkp::BackendKind::kGroth16;
  HashProfile hash_profile = HashProfile::kAlgebraic;
  unsigned lambda = 256;
  // Rounds; each round proves once at every depth, so machine-wide
  // slowdowns hit all depths alike.
  size_t repetitions = 5;
  // Verifications per depth and round.
  size_t verify_repetitions = 10;
  // Leaves inserted before proving.
  size_t users = 8;
  uint64_t seed = 1;
};

struct ProveScalingResult {
  // One record per depth: median and minimum over the rounds.
  std::vector<BenchRecord> records;
  // Prove time against depth, from per-depth minima (robust to other load
  // on the machine) and from medians.
  LinearFit prove_min_fit;
  LinearFit prove_median_fit;
  LinearFit constraint_fit;
  std::set<size_t> proof_sizes;
  // Spread of per-depth minimum verify times across depths.
  double verify_min_ms = 0;
  double verify_max_ms = 0;
};

ProveScalingResult RunProveScaling(const ProveScalingOptions& options);

struct KeyRequestOptions {
  std::vector<uint32_t> sizes{32, 256, 4096};
  // Emulated tunnel throughput in bytes per second; 0 = unthrottled.
  double tunnel_rate = 0;
  // Defaults to the mock source.
  std::optional<EntropyConfig> entropy;
  zkp::BackendKind backend = zkp::BackendKind::kGroth16;
  unsigned depth = 4;
  size_t repetitions = 3;
  uint64_t seed = 1;
};

// One record per size, medians over the repetitions. Timings: upload,
// validation, generation, encapsulation, delivery, total; plus
// params.transfer_share = (upload + delivery) / total and
// params.delivery_share = delivery / total.
std::vector<BenchRecord> RunKeyRequest(const KeyRequestOptions& options);

}  // namespace anonkey::bench

#endif  // ANONKEY_BENCH_SCENARIOS_H_
