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

#include "anonkey/pvs/registry_source.h"

#include "anonkey/core/errors.h"
#include "httplib.h"
#include "json.hpp"

namespace anonkey::pvs {
namespace {

RegistryView ViewOf(const auth::RegistryState& s) {
  return {s.tree.Root(), s.old_roots};
}

class SharedDirRegistry : public RegistrySource {
 public:
  explicit SharedDirRegistry(auth::DataDir dir) : dir_(std::move(dir)) {}
  RegistryView Fetch() override { return ViewOf(auth::LoadRegistry(dir_)); }

 private:
  auth::DataDir dir_;
};

class InProcessRegistry : public RegistrySource {
 public:
  explicit InProcessRegistry(const auth::AuthServer& server)
      : server_(server) {}
  RegistryView Fetch() override { return ViewOf(*server_.Snapshot()); }

 private:
  const auth::AuthServer& server_;
};

class HttpRegistry : public RegistrySource {
 public:
  explicit HttpRegistry(std::string url) : url_(std::move(url)) {}
  RegistryView Fetch() override {
    httplib::Client cli(url_);
    cli.set_connection_timeout(5);
    auto res = cli.Get("/v1/old-roots");
    if (!res || res->status != 200) {
      throw IoError("cannot fetch old roots from " + url_);
    }
    auto j = nlohmann::json::parse(res->body);
    RegistryView v;
    v.root = Digest::FromHex(j.at("root").get<std::string>());
    for (const auto& r : j.at("old_roots")) {
      v.old_roots.push_back(Digest::FromHex(r.get<std::string>()));
    }
    return v;
  }

 private:
  std::string url_;
};

}  // namespace

std::unique_ptr<RegistrySource> MakeSharedDirRegistry(auth::DataDir dir) {
  return std::make_unique<SharedDirRegistry>(std::move(dir));
}

std::unique_ptr<RegistrySource> MakeInProcessRegistry(
    const auth::AuthServer& server) {
  return std::make_unique<InProcessRegistry>(server);
}

std::unique_ptr<RegistrySource> MakeHttpRegistry(const std::string& base_url) {
  return std::make_unique<HttpRegistry>(base_url);
}

}  // namespace anonkey::pvs
