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

#ifndef ANONKEY_BENCH_GAMES_H_
#define ANONKEY_BENCH_GAMES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anonkey/zkp/proving_system.h"
#include "json.hpp"

namespace anonkey::bench {

struct AttackTally {
  size_t attempts = 0;
  // Attempts the adversary won (a delivery, a recovered key, a link).
  size_t successes = 0;
  std::map<std::string, size_t> outcomes;
};

struct GameReport {
  std::string name;
  size_t trials = 0;
  size_t successes = 0;
  double rate = 0;
  bool passed = false;
  std::string criterion;
  std::map<std::string, AttackTally> attacks;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json ToJson() const;
};

struct GameOptions {
  uint64_t seed = 1;
  size_t trials = 1000;
  // Backend for unforgeability and the store cross-scan.
  zkp::BackendKind backend = zkp::BackendKind::kGroth16;
  // Backend for the bulk anonymity and confidentiality trials.
  zkp::BackendKind trial_backend = zkp::BackendKind::kMock;
  // Extra anonymity trials run with `backend` when it differs from
  // `trial_backend`; 0 skips them.
  size_t backend_trials = 32;

  size_t honest_proofs = 100;
  size_t mutated_bits = 64;
  size_t statement_mutations = 10;
  size_t fake_root_proofs = 20;
  size_t scan_users = 50;
};

// Submits proof mutations, statement mutations, fake-root proofs, forged
// validation lists and replays; passes with zero acceptances.
GameReport RunUnforgeability(const GameOptions& options);

// Two registered users, one redeems; a bounded distinguisher over the
// servers' stored data guesses which. Passes when the guess rate lies in
// [0.45, 0.55].
GameReport RunAnonymity(const GameOptions& options);
// Same game over `trials` runs with the given backend.
GameReport RunAnonymity(const GameOptions& options, zkp::BackendKind backend,
                        size_t trials);

// Adversary holding (C, N, proof, pk, ciphertext) but not sk tries wrong
// keys against the decapsulation oracle; passes with zero recoveries.
GameReport RunConfidentiality(const GameOptions& options);

// Redeems for `scan_users` users, then compares every stored validation
// server field against the registration server's stored data. Only roots
// may coincide.
GameReport RunStoreCrossScan(const GameOptions& options);

std::vector<GameReport> RunAllGames(const GameOptions& options);

}  // namespace anonkey::bench

#endif  // ANONKEY_BENCH_GAMES_H_
