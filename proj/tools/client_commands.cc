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

#include <cstdlib>
#include <iostream>

#include "anonkey/client/client.h"
#include "anonkey/client/user_store.h"
#include "anonkey/core/certificate.h"
#include "anonkey/core/config.h"
#include "anonkey/core/file_util.h"
#include "anonkey/tunnel/envelope.h"
#include "anonkey/tunnel/stream.h"
#include "cli.h"

namespace anonkey::cli {

namespace {

struct Common {
  std::string store, passphrase;
};

std::unique_ptr<client::UserStore> OpenStore(const Common& c) {
  if (c.passphrase.empty()) {
    throw client::ClientError(client::ExitCode::kUsage, "",
                              "passphrase required (--passphrase or "
                              "ANONKEY_PASSPHRASE)");
  }
  return client::UserStore::Open(c.store, c.passphrase);
}

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--store", c.store, "wallet file")->required();
  cmd->add_option("--passphrase", c.passphrase)->envname("ANONKEY_PASSPHRASE");
}

double Ms(std::chrono::nanoseconds d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

}  // namespace

void AddClientCommands(CLI::App& app, Runner& run) {
  auto* client_cmd = app.add_subcommand("client", "User side");
  client_cmd->require_subcommand(1);

  struct InitArgs {
    Common common;
    std::string hash = "algebraic", kem = "dhkem";
    unsigned lambda = 256;
  };
  auto ia = std::make_shared<InitArgs>();
  auto* init = client_cmd->add_subcommand("init", "Create a note");
  AddCommon(init, ia->common);
  init->add_option("--hash-profile", ia->hash)->capture_default_str();
  init->add_option("--kem", ia->kem)->capture_default_str();
  init->add_option("--lambda", ia->lambda)->capture_default_str();
  init->callback([&run, ia] {
    run = [ia] {
      auto store = OpenStore(ia->common);
      ProtocolConfig p;
      p.hash_profile = ParseHashProfile(ia->hash);
      p.kem_profile = ParseKemProfile(ia->kem);
      p.lambda = ia->lambda;
      p.Validate();
      OsEntropySource entropy;
      std::cout << client::Client(*store).Init(p, entropy) << "\n";
      return 0;
    };
  });

  struct AuthArgs {
    Common common;
    std::string note, cert, key, as_url;
  };
  auto aa = std::make_shared<AuthArgs>();
  auto* auth = client_cmd->add_subcommand("auth", "Register a note");
  AddCommon(auth, aa->common);
  auth->add_option("--note", aa->note)->required();
  auth->add_option("--cert", aa->cert)->required();
  auth->add_option("--signing-key", aa->key)->required();
  auth->add_option("--as-url", aa->as_url)->required();
  auth->callback([&run, aa] {
    run = [aa] {
      auto store = OpenStore(aa->common);
      const auto keys = SigningKeyPair::Parse(ReadFileBytes(aa->key));
      auto r = client::Client(*store).Auth(aa->note, ReadFileBytes(aa->cert),
                                           keys.signing_key,
                                           client::AsClient(aa->as_url));
      std::cout << "registered, root " << r.new_root.Hex() << "\n";
      return 0;
    };
  });

  struct ProveArgs {
    Common common;
    std::string note, as_url, proving_key, out;
  };
  auto pa = std::make_shared<ProveArgs>();
  auto* prove = client_cmd->add_subcommand("prove", "Build a proof bundle");
  AddCommon(prove, pa->common);
  prove->add_option("--note", pa->note)->required();
  prove->add_option("--as-url", pa->as_url)->required();
  prove->add_option("--proving-key", pa->proving_key,
                    "local copy; fetched from the server otherwise");
  prove->add_option("--out", pa->out, "bundle file")->required();
  prove->callback([&run, pa] {
    run = [pa] {
      auto store = OpenStore(pa->common);
      client::AsClient as(pa->as_url);
      const Bytes pk = pa->proving_key.empty()
                           ? as.FetchProvingKey()
                           : ReadFileBytes(pa->proving_key);
      auto prover = zkp::Prover::Load(pk);
      auto bundle = client::Client(*store).Prove(pa->note, as, prover);
      WriteFileAtomic(pa->out, bundle.Serialize(), 0600);
      std::cout << "bundle " << pa->out << ", proof "
                << bundle.proof.size() << " bytes\n";
      return 0;
    };
  });

  struct RequestArgs {
    Common common;
    std::string bundle, pvs_addr, out;
    uint32_t t = 0;
  };
  auto ra = std::make_shared<RequestArgs>();
  auto* req = client_cmd->add_subcommand(
      "request-key", "Redeem a bundle with the validation server");
  AddCommon(req, ra->common);
  req->add_option("--bundle", ra->bundle)->required();
  req->add_option("--t", ra->t, "key length in bytes")->required();
  req->add_option("--pvs-addr", ra->pvs_addr, "host:port")->required();
  req->add_option("--out", ra->out, "key file")->required();
  req->callback([&run, ra] {
    run = [ra] {
      auto store = OpenStore(ra->common);
      auto bundle = tunnel::KeyRequest::Parse(ReadFileBytes(ra->bundle));
      auto [host, port] = tunnel::ParseHostPort(ra->pvs_addr);
      std::unique_ptr<tunnel::FrameStream> stream;
      try {
        stream = tunnel::ConnectTcp(host, port);
      } catch (const std::exception& e) {
        throw client::ClientError(client::ExitCode::kValidationServer,
                                  "unreachable", e.what());
      }
      auto result = client::Client(*store).RequestKey(bundle, ra->t, *stream);
      client::WriteKeyFile(ra->out, result.key);
      std::cout << "key " << result.key.size() << " bytes -> " << ra->out
                << " (session " << Ms(result.session) << " ms)\n";
      return 0;
    };
  });

  auto sh = std::make_shared<Common>();
  auto* show = client_cmd->add_subcommand("show", "List notes");
  AddCommon(show, *sh);
  show->callback([&run, sh] {
    run = [sh] {
      auto store = OpenStore(*sh);
      for (const auto& id : store->ids()) {
        const auto& r = store->Get(id);
        std::cout << id << "  " << client::NoteStateName(r.state) << "  "
                  << HashProfileName(r.hash_profile) << "  "
                  << KemProfileName(KemProfileOfKey(r.note.pk));
        if (r.registered_root) {
          std::cout << "  root " << r.registered_root->Hex().substr(0, 16);
        }
        std::cout << "\n";
      }
      return 0;
    };
  });
}

}  // namespace anonkey::cli
