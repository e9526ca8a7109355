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

#ifndef ANONKEY_PVS_REGISTRY_SOURCE_H_
#define ANONKEY_PVS_REGISTRY_SOURCE_H_

#include <memory>
#include <string>
#include <vector>

#include "anonkey/auth/auth_server.h"
#include "anonkey/core/digest.h"

namespace anonkey::pvs {

// The validation server's copy of the public registry state.
struct RegistryView {
  Digest root;
  std::vector<Digest> old_roots;
};

class RegistrySource {
 public:
  virtual ~RegistrySource() = default;
  // Throws on failure (unreachable server, unreadable file).
  virtual RegistryView Fetch() = 0;
};

// Reads registry.bin from the shared data directory.
std::unique_ptr<RegistrySource> MakeSharedDirRegistry(auth::DataDir dir);
// Queries an authentication server object in the same process.
std::unique_ptr<RegistrySource> MakeInProcessRegistry(
    const auth::AuthServer& server);
// GET {base_url}/v1/old-roots, e.g. "http://127.0.0.1:8080".
std::unique_ptr<RegistrySource> MakeHttpRegistry(const std::string& base_url);

}  // namespace anonkey::pvs

#endif  // ANONKEY_PVS_REGISTRY_SOURCE_H_
