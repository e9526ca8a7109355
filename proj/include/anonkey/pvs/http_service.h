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

#ifndef ANONKEY_PVS_HTTP_SERVICE_H_
#define ANONKEY_PVS_HTTP_SERVICE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <thread>

#include "anonkey/pvs/pvs.h"

namespace httplib {
class Server;
}

namespace anonkey::pvs {

// Observability endpoints: GET /health and GET /nullifiers.
class PvsHttpService {
 public:
  explicit PvsHttpService(Pvs& pvs);
  ~PvsHttpService();

  uint16_t Start(const std::string& host, uint16_t port);
  void Stop();

 private:
  Pvs& pvs_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
};

}  // namespace anonkey::pvs

#endif  // ANONKEY_PVS_HTTP_SERVICE_H_
