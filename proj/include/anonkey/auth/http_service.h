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

#ifndef ANONKEY_AUTH_HTTP_SERVICE_H_
#define ANONKEY_AUTH_HTTP_SERVICE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "anonkey/auth/auth_server.h"
#include "anonkey/core/digest.h"

namespace httplib {
class Server;
}

namespace anonkey::auth {

// REST front end:
//   POST /v1/register     {certificate, commitment, signature} (hex)
//   GET  /v1/tree         tree snapshot
//   GET  /v1/old-roots    previous roots
//   GET  /v1/vk           verification key and fingerprint
//   GET  /v1/proving-key  raw proving key bytes
//   GET  /v1/nullifiers   spent nullifiers read from shared state
class AuthHttpService {
 public:
  using NullifierLister = std::function<std::vector<Digest>()>;

  AuthHttpService(AuthServer& server, NullifierLister nullifiers);
  ~AuthHttpService();

  // Binds and serves on a background thread. Port 0 picks a free port.
  // Returns the bound port; throws IoError if binding fails.
  uint16_t Start(const std::string& host, uint16_t port);
  // Blocks serving on the calling thread.
  void Run(const std::string& host, uint16_t port);
  void Stop();

 private:
  void Install();

  AuthServer& server_;
  NullifierLister nullifiers_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace anonkey::auth

#endif  // ANONKEY_AUTH_HTTP_SERVICE_H_
