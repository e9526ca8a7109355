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

#include <iostream>
#include <thread>

#include "anonkey/auth/auth_server.h"
#include "anonkey/auth/http_service.h"
#include "anonkey/core/certificate.h"
#include "anonkey/core/entropy.h"
#include "anonkey/core/file_util.h"
#include "anonkey/pvs/http_service.h"
#include "anonkey/pvs/nullifier_store.h"
#include "anonkey/pvs/pvs.h"
#include "anonkey/pvs/registry_source.h"
#include "anonkey/tunnel/stream.h"
#include "cli.h"
#include "spdlog/spdlog.h"

namespace anonkey::cli {

namespace {

void WriteSecretFile(const std::filesystem::path& path, ByteSpan data) {
  WriteFileAtomic(path, data, 0600);
}

}  // namespace

void AddCaCommands(CLI::App& app, Runner& run) {
  auto* ca = app.add_subcommand("ca", "Test certificate authority");
  ca->require_subcommand(1);

  struct InitArgs {
    std::string out;
  };
  auto init_args = std::make_shared<InitArgs>();
  auto* init = ca->add_subcommand("init", "Create a CA key pair");
  init->add_option("--out", init_args->out, "CA key file")->required();
  init->callback([&run, init_args] {
    run = [init_args] {
      OsEntropySource entropy;
      auto keys = GenerateSigningKey(entropy);
      WriteSecretFile(init_args->out, keys.Serialize());
      std::cout << "ca_verify_key " << ToHex(keys.verify_key) << "\n";
      return 0;
    };
  });

  struct IssueArgs {
    std::string ca_key, subject, cert_out, key_out;
  };
  auto issue_args = std::make_shared<IssueArgs>();
  auto* issue = ca->add_subcommand(
      "issue", "Create a user signing key and certify it");
  issue->add_option("--ca-key", issue_args->ca_key)->required();
  issue->add_option("--subject", issue_args->subject)->required();
  issue->add_option("--cert-out", issue_args->cert_out)->required();
  issue->add_option("--key-out", issue_args->key_out)->required();
  issue->callback([&run, issue_args] {
    run = [issue_args] {
      TestCa ca(SigningKeyPair::Parse(ReadFileBytes(issue_args->ca_key)));
      OsEntropySource entropy;
      auto user = GenerateSigningKey(entropy);
      auto cert = ca.Issue(issue_args->subject, user.verify_key);
      WriteFileAtomic(issue_args->cert_out, cert.Serialize(), 0644);
      WriteSecretFile(issue_args->key_out, user.Serialize());
      return 0;
    };
  });
}

void AddServerCommands(CLI::App& app, Runner& run) {
  auto* server = app.add_subcommand("server", "Deployment setup");
  server->require_subcommand(1);

  struct SetupArgs {
    std::string dir, backend = "groth16", hash = "algebraic", kem = "dhkem";
    std::string ca_key;
    unsigned depth = 8, lambda = 256;
    size_t retention = 0;
    std::optional<uint64_t> test_seed;
    bool reset = false;
  };
  auto sa = std::make_shared<SetupArgs>();
  auto* setup = server->add_subcommand(
      "setup", "Create the shared data directory and the CRS");
  setup->add_option("--dir", sa->dir)->required();
  setup->add_option("--depth", sa->depth)->capture_default_str();
  setup->add_option("--backend", sa->backend, "groth16|mock")
      ->capture_default_str();
  setup->add_option("--hash-profile", sa->hash, "algebraic|sha256")
      ->capture_default_str();
  setup->add_option("--kem", sa->kem, "dhkem|rsa-oaep")->capture_default_str();
  setup->add_option("--lambda", sa->lambda)->capture_default_str();
  setup->add_option("--ca-key", sa->ca_key,
                    "CA key file (only its public half is stored)")
      ->required();
  setup->add_option("--old-roots-retention", sa->retention,
                    "previous roots kept, 0 = all")
      ->capture_default_str();
  setup->add_option("--test-seed", sa->test_seed,
                    "deterministic trapdoors; proofs become forgeable");
  setup->add_flag("--reset", sa->reset, "overwrite existing state");
  setup->callback([&run, sa] {
    run = [sa] {
      auth::ServerConfig c;
      c.protocol.hash_profile = ParseHashProfile(sa->hash);
      c.protocol.kem_profile = ParseKemProfile(sa->kem);
      c.protocol.lambda = sa->lambda;
      c.depth = sa->depth;
      c.backend = zkp::ParseBackendKind(sa->backend);
      c.ca_verify_key =
          SigningKeyPair::Parse(ReadFileBytes(sa->ca_key)).verify_key;
      c.old_roots_retention = sa->retention;
      c.test_seed = sa->test_seed;
      auto as = auth::AuthServer::ServerSetup(sa->dir, c, sa->reset);
      std::cout << "root " << as->Root().Hex() << "\n"
                << "fingerprint " << as->crs().fingerprint.Hex() << "\n";
      return 0;
    };
  });

  struct AsArgs {
    std::string dir, listen = "127.0.0.1:8080";
  };
  auto aa = std::make_shared<AsArgs>();
  auto* as_cmd = app.add_subcommand("as", "Run the registration server");
  as_cmd->add_option("--dir", aa->dir)->required();
  as_cmd->add_option("--listen", aa->listen)->capture_default_str();
  as_cmd->callback([&run, aa] {
    run = [aa] {
      BlockTerminationSignals();
      auto server = auth::AuthServer::Open(aa->dir);
      const auth::DataDir dir{aa->dir};
      auth::AuthHttpService http(*server, [dir] {
        std::vector<Digest> out;
        for (const auto& r : pvs::ReadNullifierRecords(
                 dir.nullifier_log(), dir.nullifier_snapshot())) {
          out.push_back(r.nullifier.value);
        }
        return out;
      });
      auto [host, port] = tunnel::ParseHostPort(aa->listen);
      const uint16_t bound = http.Start(host, port);
      spdlog::info("registration server on {}:{}", host, bound);
      WaitForTermination();
      http.Stop();
      return 0;
    };
  });

  struct PvsArgs {
    std::string dir, listen = "127.0.0.1:9000", http, as_url;
    std::string entropy = "os", entropy_endpoint;
    double entropy_latency_ms = 0, entropy_rate = 0;
    uint64_t mock_seed = 0;
    size_t max_t = pvs::kDefaultMaxKeyBytes;
    unsigned sync_ms = 1000;
  };
  auto pa = std::make_shared<PvsArgs>();
  auto* pvs_cmd = app.add_subcommand("pvs", "Run the validation server");
  pvs_cmd->add_option("--dir", pa->dir, "shared data directory")->required();
  pvs_cmd->add_option("--listen", pa->listen, "tunnel endpoint")
      ->capture_default_str();
  pvs_cmd->add_option("--http", pa->http, "health endpoint, e.g. :9001");
  pvs_cmd->add_option("--as-url", pa->as_url,
                      "fetch roots over HTTP instead of the shared directory");
  pvs_cmd->add_option("--entropy", pa->entropy, "os|mock|external")
      ->capture_default_str();
  pvs_cmd->add_option("--entropy-endpoint", pa->entropy_endpoint,
                      "file, device or tcp://host:port");
  pvs_cmd->add_option("--entropy-latency-ms", pa->entropy_latency_ms);
  pvs_cmd->add_option("--entropy-rate", pa->entropy_rate, "bytes per second");
  pvs_cmd->add_option("--mock-seed", pa->mock_seed);
  pvs_cmd->add_option("--max-t", pa->max_t)->capture_default_str();
  pvs_cmd->add_option("--sync-ms", pa->sync_ms, "registry refresh, 0 = off")
      ->capture_default_str();
  pvs_cmd->callback([&run, pa] {
    run = [pa] {
      BlockTerminationSignals();
      EntropyConfig ec;
      ec.kind = ParseEntropyKind(pa->entropy);
      ec.mock_seed = pa->mock_seed;
      ec.external.endpoint = pa->entropy_endpoint;
      ec.external.setup_latency = std::chrono::microseconds(
          static_cast<int64_t>(pa->entropy_latency_ms * 1000));
      ec.external.rate_bytes_per_second = pa->entropy_rate;
      std::shared_ptr<EntropySource> entropy = MakeEntropySource(ec);
      pvs::PvsOptions opts;
      opts.max_t = pa->max_t;
      opts.sync_interval = std::chrono::milliseconds(pa->sync_ms);
      auto registry = pa->as_url.empty()
                          ? nullptr
                          : pvs::MakeHttpRegistry(pa->as_url);
      auto validation = pvs::Pvs::OpenShared(auth::DataDir{pa->dir}, entropy,
                                             opts, std::move(registry));
      std::unique_ptr<pvs::PvsHttpService> http;
      if (!pa->http.empty()) {
        http = std::make_unique<pvs::PvsHttpService>(*validation);
        auto [h, p] = tunnel::ParseHostPort(pa->http);
        spdlog::info("health endpoint on {}:{}", h, http->Start(h, p));
      }
      auto [host, port] = tunnel::ParseHostPort(pa->listen);
      tunnel::TcpListener listener(host, port);
      spdlog::info("validation server on {}:{}", host, listener.port());
      std::thread serve([&] { validation->Serve(listener); });
      WaitForTermination();
      listener.Close();
      serve.join();
      if (http) http->Stop();
      return 0;
    };
  });
}

}  // namespace anonkey::cli
