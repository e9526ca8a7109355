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

#include <fstream>
#include <iostream>

#include "anonkey/bench/games.h"
#include "anonkey/bench/records.h"
#include "anonkey/bench/scenarios.h"
#include "cli.h"

namespace anonkey::cli {

namespace {

void Emit(const std::string& out, const std::vector<bench::BenchRecord>& r) {
  if (out.empty()) {
    bench::WriteJsonl(std::cout, r);
    return;
  }
  std::ofstream f(out);
  if (out.ends_with(".csv")) {
    bench::WriteCsv(f, r);
  } else {
    bench::WriteJsonl(f, r);
  }
  if (!f) throw IoError("cannot write " + out);
}

}  // namespace

void AddBenchCommands(CLI::App& app, Runner& run) {
  auto* bench_cmd = app.add_subcommand("bench", "Measurements");
  bench_cmd->require_subcommand(1);

  struct ScalingArgs {
    std::vector<unsigned> depths{4, 8, 12, 16};
    std::string backend = "groth16", hash = "algebraic", out;
    size_t reps = 5;
    uint64_t seed = 1;
  };
  auto sa = std::make_shared<ScalingArgs>();
  auto* scaling = bench_cmd->add_subcommand(
      "prove-scaling", "Proving cost against tree depth");
  scaling->add_option("--depths", sa->depths)->delimiter(',')
      ->capture_default_str();
  scaling->add_option("--backend", sa->backend)->capture_default_str();
  scaling->add_option("--hash-profile", sa->hash)->capture_default_str();
  scaling->add_option("--reps", sa->reps)->capture_default_str();
  scaling->add_option("--seed", sa->seed)->capture_default_str();
  scaling->add_option("--out", sa->out, ".jsonl or .csv; stdout if empty");
  scaling->callback([&run, sa] {
    run = [sa] {
      bench::ProveScalingOptions o;
      o.depths = sa->depths;
      o.backend = zkp::ParseBackendKind(sa->backend);
      o.hash_profile = ParseHashProfile(sa->hash);
      o.repetitions = sa->reps;
      o.seed = sa->seed;
      auto r = bench::RunProveScaling(o);
      Emit(sa->out, r.records);
      std::cerr << "prove time fit (minima): slope " << r.prove_min_fit.slope
                << " ms/level, r2 " << r.prove_min_fit.r2 << "\n"
                << "prove time fit (medians): slope "
                << r.prove_median_fit.slope << " ms/level, r2 "
                << r.prove_median_fit.r2 << "\n"
                << "constraint fit: slope " << r.constraint_fit.slope
                << "/level, r2 " << r.constraint_fit.r2 << "\n";
      return 0;
    };
  });

  struct KeyArgs {
    std::vector<uint32_t> sizes{32, 256, 4096};
    double rate = 0, latency_ms = 0;
    std::string entropy = "mock", endpoint = "/dev/urandom";
    std::string backend = "groth16", out;
    size_t reps = 3;
    unsigned depth = 4;
    uint64_t seed = 1;
  };
  auto ka = std::make_shared<KeyArgs>();
  auto* key = bench_cmd->add_subcommand(
      "key-request", "Phases of one key request against key length");
  key->add_option("--sizes", ka->sizes)->delimiter(',')->capture_default_str();
  key->add_option("--rate", ka->rate, "tunnel bytes per second, 0 = off")
      ->capture_default_str();
  key->add_option("--entropy", ka->entropy, "mock|os|external")
      ->capture_default_str();
  key->add_option("--entropy-endpoint", ka->endpoint)->capture_default_str();
  key->add_option("--entropy-latency-ms", ka->latency_ms)
      ->capture_default_str();
  key->add_option("--backend", ka->backend)->capture_default_str();
  key->add_option("--depth", ka->depth)->capture_default_str();
  key->add_option("--reps", ka->reps)->capture_default_str();
  key->add_option("--seed", ka->seed)->capture_default_str();
  key->add_option("--out", ka->out, ".jsonl or .csv; stdout if empty");
  key->callback([&run, ka] {
    run = [ka] {
      bench::KeyRequestOptions o;
      o.sizes = ka->sizes;
      o.tunnel_rate = ka->rate;
      EntropyConfig ec;
      ec.kind = ParseEntropyKind(ka->entropy);
      ec.mock_seed = ka->seed;
      ec.external.endpoint = ka->endpoint;
      ec.external.setup_latency = std::chrono::microseconds(
          static_cast<int64_t>(ka->latency_ms * 1000));
      o.entropy = ec;
      o.backend = zkp::ParseBackendKind(ka->backend);
      o.depth = ka->depth;
      o.repetitions = ka->reps;
      o.seed = ka->seed;
      Emit(ka->out, bench::RunKeyRequest(o));
      return 0;
    };
  });

  struct GameArgs {
    uint64_t seed = 1;
    size_t trials = 1000;
    std::string backend = "groth16", trial_backend = "mock", out;
  };
  auto ga = std::make_shared<GameArgs>();
  auto* games = app.add_subcommand("games", "Security game suites");
  games->require_subcommand(1);
  auto* all = games->add_subcommand("all", "Run every game");
  all->add_option("--seed", ga->seed)->capture_default_str();
  all->add_option("--trials", ga->trials)->capture_default_str();
  all->add_option("--backend", ga->backend)->capture_default_str();
  all->add_option("--trial-backend", ga->trial_backend,
                  "backend for the bulk anonymity/confidentiality trials")
      ->capture_default_str();
  all->add_option("--out", ga->out, "JSON report");
  all->callback([&run, ga] {
    run = [ga] {
      bench::GameOptions o;
      o.seed = ga->seed;
      o.trials = ga->trials;
      o.backend = zkp::ParseBackendKind(ga->backend);
      o.trial_backend = zkp::ParseBackendKind(ga->trial_backend);
      auto reports = bench::RunAllGames(o);
      nlohmann::json j = nlohmann::json::array();
      bool ok = true;
      for (const auto& r : reports) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": "
                  << r.successes << "/" << r.trials << " adversary wins ("
                  << r.criterion << ")\n";
        ok &= r.passed;
        j.push_back(r.ToJson());
      }
      if (!ga->out.empty()) {
        std::ofstream(ga->out) << j.dump(2) << "\n";
      }
      return ok ? 0 : 1;
    };
  });
}

}  // namespace anonkey::cli
